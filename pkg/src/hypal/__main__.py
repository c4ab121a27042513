"""エントリーポイント: uv run python -m hypal"""

from hypal.presentation.cli import main

if __name__ == "__main__":
    main()
