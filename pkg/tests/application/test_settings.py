"""settings.py のテスト。"""

import pytest

from hypal.application.settings import SEED_ENV, SolverSettings
from hypal.domain.errors import ConfigurationError, HypalError


class TestSolverSettings:
    def test_defaults(self) -> None:
        s = SolverSettings()
        assert s.tol == 1e-12
        assert s.max_iter == 100_000
        assert s.epoch == 64
        assert s.samples == 20
        assert s.seed == 0

    def test_clamping(self) -> None:
        s = SolverSettings(tol=-1.0, max_iter=0, epoch=-5, samples=-1)
        assert s.tol == 0.0
        assert s.max_iter == 1
        assert s.epoch == 1
        assert s.samples == 0

    def test_from_env(self) -> None:
        assert SolverSettings.from_env({SEED_ENV: "42"}).seed == 42
        assert SolverSettings.from_env({SEED_ENV: "  "}).seed == 0
        assert SolverSettings.from_env({}).seed == 0

    def test_from_env_rejects_non_integer(self) -> None:
        with pytest.raises(ConfigurationError, match=SEED_ENV) as info:
            SolverSettings.from_env({SEED_ENV: "abc"})
        assert isinstance(info.value, HypalError)

    def test_with_overrides_ignores_none(self) -> None:
        s = SolverSettings(seed=3).with_overrides(tol=None, max_iter=50, samples=None)
        assert s.max_iter == 50
        assert s.tol == 1e-12
        assert s.seed == 3
