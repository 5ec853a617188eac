"""
Tests for training configs, search grids and the YAML loader
"""

import pytest

from grbf_spectrum.config import (
    ConfigDocument,
    GridSpec,
    Regularizers,
    TrainConfig,
    default_grid,
    load_config,
    load_config_from_text,
)


class TestTrainConfig:
    def test_defaults(self):
        cfg = TrainConfig()

        assert cfg.n_centers == 32
        assert cfg.center_mode == "unsupervised"
        assert cfg.learning_rate == 1e-3
        assert cfg.reg == Regularizers()

    def test_mode_aliases(self):
        assert TrainConfig(center_mode="kmeans").center_mode == "unsupervised"
        assert TrainConfig(center_mode="learn").is_supervised

    @pytest.mark.parametrize(
        "field_name,value",
        [
            ("n_centers", 0),
            ("n_centers", 2.5),
            ("learning_rate", 0.0),
            ("max_epochs", True),
            ("tolerance", -1.0),
            ("seed", -3),
            ("adam_beta1", 1.0),
            ("center_mode", "fixed"),
            ("center_init", "grid"),
        ],
    )
    def test_invalid_values(self, field_name, value):
        with pytest.raises(ValueError):
            TrainConfig(**{field_name: value})

    def test_negative_regularizer_is_rejected(self):
        with pytest.raises(ValueError, match="lambda_u"):
            Regularizers(lambda_u=-0.1)

    def test_from_dict_accepts_flat_and_nested_regularizers(self):
        flat = TrainConfig.from_dict({"lambda_w": 0.5, "n_centers": 4})
        nested = TrainConfig.from_dict({"reg": {"lambda_w": 0.5}, "n_centers": 4})

        assert flat == nested
        assert flat.reg.lambda_w == 0.5

    def test_from_dict_rejects_unknown_keys(self):
        with pytest.raises(ValueError, match="momentum"):
            TrainConfig.from_dict({"momentum": 0.9})
        with pytest.raises(ValueError, match="reg.lambda_x"):
            TrainConfig.from_dict({"reg": {"lambda_x": 1.0}})

    def test_round_trip_through_dict(self):
        cfg = TrainConfig(n_centers=8, reg=Regularizers(lambda_c=2.0), center_mode="learn")

        assert TrainConfig.from_dict(cfg.to_dict()) == cfg


class TestGridSpec:
    def test_size_and_order(self):
        grid = GridSpec(n_centers=(2, 4), lambda_w=(0.0, 1.0), lambda_u=(0.0, 0.1, 1.0))

        configs = grid.configs(TrainConfig(max_epochs=7))

        assert grid.size == 12
        assert len(configs) == 12
        assert [c.reg.lambda_u for c in configs[:3]] == [0.0, 0.1, 1.0]
        assert configs[3].reg.lambda_w == 1.0
        assert configs[6].n_centers == 4
        assert all(c.max_epochs == 7 for c in configs)

    def test_scalars_become_single_value_axes(self):
        grid = GridSpec(n_centers=8, center_mode="learn")

        assert grid.n_centers == (8,)
        assert grid.center_mode == ("supervised",)
        assert grid.size == 1

    def test_empty_axis_and_unknown_option(self):
        with pytest.raises(ValueError, match="at least one value"):
            GridSpec(lambda_w=())
        with pytest.raises(ValueError, match="Unknown grid option"):
            GridSpec.from_dict({"batch_size": [1]})

    def test_default_grids(self):
        assert default_grid("regression").size == 3 * 2 * 8 * 8
        assert default_grid("binary").n_centers == (2, 4, 8, 16, 32)


class TestLoader:
    def test_empty_document(self):
        assert load_config_from_text("") == ConfigDocument()

    def test_scientific_notation_is_numeric(self):
        document = load_config_from_text("train:\n  learning_rate: 1e-3\n  lambda_u: 1E-2\n")

        cfg = document.train_config()
        assert cfg.learning_rate == 1e-3
        assert cfg.reg.lambda_u == 1e-2

    def test_overrides_ignore_none(self):
        document = load_config_from_text("train:\n  n_centers: 16\n")

        assert document.train_config(n_centers=None).n_centers == 16
        assert document.train_config(n_centers=4).n_centers == 4

    def test_grid_section(self):
        document = load_config_from_text("grid:\n  lambda_w: [0, 1e-3, 1]\n  n_centers: [8]\n")

        grid = document.grid_spec()
        assert grid.lambda_w == (0, 1e-3, 1.0)
        assert grid.size == 3

    def test_all_problems_are_reported(self):
        text = "train:\n  n_centers: 0\ngrid:\n  colour: [1]\nextra: {}\n"

        with pytest.raises(ValueError) as excinfo:
            load_config_from_text(text, "bad.yaml")

        message = str(excinfo.value)
        assert "bad.yaml" in message
        assert "Unknown section 'extra'" in message

    def test_invalid_sections_are_reported_together(self):
        text = "train:\n  n_centers: 0\ngrid:\n  colour: [1]\n"

        with pytest.raises(ValueError) as excinfo:
            load_config_from_text(text)

        assert "Section 'train'" in str(excinfo.value)
        assert "Section 'grid'" in str(excinfo.value)

    def test_non_mapping_document(self):
        with pytest.raises(ValueError, match="mapping"):
            load_config_from_text("- 1\n- 2\n")

    def test_load_config_from_file(self, tmp_path):
        path = tmp_path / "defaults.yaml"
        path.write_text("train:\n  max_epochs: 50\n", encoding="utf-8")

        assert load_config(path).train_config().max_epochs == 50
        with pytest.raises(FileNotFoundError):
            load_config(tmp_path / "missing.yaml")
