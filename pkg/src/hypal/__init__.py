"""hypal — 有限ハイパーグループの Haar 測度を構成的に求めるツール。"""
