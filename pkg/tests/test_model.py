"""Tests for the network output, the objective and its analytic gradients."""

import math

import numpy as np
import pytest

from grbf_spectrum.config import Regularizers
from grbf_spectrum.errors import DimensionError, ModeError
from grbf_spectrum.kernel import PrecisionFactor, vech
from grbf_spectrum.model import (
    GrbfnnModel,
    Standardization,
    TargetTransform,
    encode_targets,
    finite_difference_gradient,
    forward,
    grad_c,
    grad_u,
    grad_w,
    gradient_check,
    load_model,
    loss_E,
    loss_R,
    predict,
    predict_proba,
    relative_error,
    save_model,
)
from grbf_spectrum.tools.gradcheck import build_random_instance


def _single_center_model(weight=1.0, u=1.0, center_mode="unsupervised"):
    return GrbfnnModel(
        weights=[[weight]],
        factor=PrecisionFactor(dim=1, u=[u]),
        centers=[[0.0]],
        center_mode=center_mode,
        standardization=Standardization.identity(1),
    )


def test_forward_single_center_kernel_value():
    model = _single_center_model()

    assert forward(model, [[1.0]])[0, 0] == pytest.approx(math.exp(-0.5))


def test_zero_weights_give_zero_output(unsupervised_instance):
    model, X, _ = unsupervised_instance
    model = model.with_params(weights=np.zeros_like(model.weights))

    assert np.array_equal(forward(model, X), np.zeros((X.shape[0], 1)))


def test_forward_rejects_wrong_feature_count(unsupervised_instance):
    model, _, _ = unsupervised_instance

    with pytest.raises(DimensionError):
        forward(model, np.zeros((2, 4)))


def test_model_validates_shapes():
    with pytest.raises(DimensionError):
        GrbfnnModel(
            weights=np.zeros((2, 1)),
            factor=PrecisionFactor.isotropic(2),
            centers=np.zeros((3, 2)),
            center_mode="unsupervised",
            standardization=Standardization.identity(2),
        )


def test_n_parameters_counts_centers_only_when_learned():
    unsupervised, _, _ = build_random_instance(5, 3, 4, 2, "kmeans", seed=0)
    supervised, _, _ = build_random_instance(5, 3, 4, 2, "learn", seed=0)

    assert unsupervised.n_parameters == 4 * 2 + 3 + 3
    assert supervised.n_parameters == 4 * 2 + 3 + 3 + 4 * 3


def test_loss_values_on_hand_instance():
    model = _single_center_model()
    X = np.array([[0.0], [1.0]])
    Y = np.array([[1.0], [0.0]])
    expected_E = 0.5 * math.exp(-0.5) ** 2

    assert loss_E(model, X, Y) == pytest.approx(expected_E)
    reg = Regularizers(lambda_w=2.0, lambda_u=4.0)
    assert loss_R(model, X, Y, reg) == pytest.approx(expected_E + 0.5 * 4.0 + 0.5 * 2.0)


def test_loss_R_equals_loss_E_without_penalties(supervised_instance):
    model, X, Y = supervised_instance

    assert loss_R(model, X, Y, Regularizers()) == loss_E(model, X, Y)


def test_center_penalty_applies_only_in_supervised_mode(unsupervised_instance):
    model, X, Y = unsupervised_instance
    with_c = Regularizers(lambda_c=100.0)

    assert loss_R(model, X, Y, with_c) == loss_E(model, X, Y)


def test_target_shape_mismatch_is_rejected(unsupervised_instance):
    model, X, _ = unsupervised_instance

    with pytest.raises(DimensionError):
        loss_E(model, X, np.zeros((X.shape[0], 3)))


def test_grad_w_at_perfect_fit_is_penalty_only():
    model = _single_center_model(weight=2.0)
    X = np.array([[0.0], [0.5]])
    Y = forward(model, X)
    reg = Regularizers(lambda_w=0.3)

    assert grad_w(model, X, Y, reg)[0, 0] == pytest.approx(0.3 * 2.0)


def test_grad_u_is_zero_at_zero_weights_without_penalty(unsupervised_instance):
    model, X, Y = unsupervised_instance
    model = model.with_params(weights=np.zeros_like(model.weights))

    assert np.allclose(grad_u(model, X, Y, Regularizers()), 0.0)


def test_grad_c_requires_supervised_mode(unsupervised_instance, reg):
    model, X, Y = unsupervised_instance

    with pytest.raises(ModeError):
        grad_c(model, X, Y, reg)
    with pytest.raises(ModeError):
        finite_difference_gradient(model, X, Y, reg, "c")


@pytest.mark.parametrize("mode", ["kmeans", "learn"])
def test_analytic_gradients_match_finite_differences(mode):
    rng = np.random.default_rng(2024)
    for instance in range(20):
        n = int(rng.integers(1, 11))
        d = int(rng.integers(1, 5))
        m = int(rng.integers(1, 4))
        outputs = int(rng.integers(1, 3))
        model, X, Y = build_random_instance(n, d, m, outputs, mode, seed=instance)
        lambdas = rng.choice([0.0, 0.1, 1.0], size=3)
        reg = Regularizers(lambda_w=lambdas[0], lambda_u=lambdas[1], lambda_c=lambdas[2])

        report = gradient_check(model, X, Y, reg)

        expected_blocks = {"w", "u", "c"} if mode == "learn" else {"w", "u"}
        assert set(report.errors) == expected_blocks
        assert report.max_error <= 1e-5, report.render()


def test_grad_u_in_one_dimension_matches_chain_rule():
    u, lambda_u = 0.8, 0.2
    weights = [1.5, -0.7]
    centers = [0.0, 1.0]
    xs = [0.3, -0.5, 1.2]
    ys = [1.0, 0.0, 0.5]
    model = GrbfnnModel(
        weights=np.array(weights).reshape(2, 1),
        factor=PrecisionFactor(dim=1, u=[u]),
        centers=np.array(centers).reshape(2, 1),
        center_mode="unsupervised",
        standardization=Standardization.identity(1),
    )

    expected = lambda_u * u
    for x, y in zip(xs, ys):
        phis = [math.exp(-0.5 * u**2 * (x - c) ** 2) for c in centers]
        residual = y - sum(w * phi for w, phi in zip(weights, phis))
        expected -= residual * sum(
            w * phi * (-u * (x - c) ** 2) for w, phi, c in zip(weights, phis, centers)
        )

    X = np.array(xs).reshape(-1, 1)
    Y = np.array(ys).reshape(-1, 1)
    grad = grad_u(model, X, Y, Regularizers(lambda_u=lambda_u))

    assert grad.shape == (1,)
    assert grad[0] == pytest.approx(expected, rel=1e-12)


def test_loss_R_ignores_row_signs_of_the_factor(supervised_instance, reg):
    model, X, Y = supervised_instance
    flipped_rows = np.diag([1.0, -1.0, -1.0])
    U = model.factor.matrix

    base = loss_R(model.with_params(u=vech(np.diag([2.0, -1.0, 0.5]))), X, Y, reg)
    flipped = loss_R(model.with_params(u=vech(np.diag([-2.0, 1.0, 0.5]))), X, Y, reg)

    assert flipped == pytest.approx(base, rel=1e-12)
    assert loss_R(model.with_params(u=vech(flipped_rows @ U)), X, Y, reg) == pytest.approx(
        loss_R(model, X, Y, reg), rel=1e-12
    )


def test_gradient_check_detects_sign_flip(supervised_instance, reg):
    model, X, Y = supervised_instance

    def flipped(*args):
        return -grad_u(*args)

    report = gradient_check(model, X, Y, reg, analytic={"u": flipped})

    assert report.errors["u"] == pytest.approx(2.0, abs=1e-4)
    assert not report.passed()


def test_gradient_check_rejects_nonpositive_step(unsupervised_instance, reg):
    model, X, Y = unsupervised_instance

    with pytest.raises(ValueError):
        gradient_check(model, X, Y, reg, step=0.0)


def test_relative_error_of_identical_vectors_is_zero():
    assert relative_error([1.0, 2.0], [1.0, 2.0]) == 0.0
    assert relative_error([0.0], [0.0]) == 0.0


def test_standardization_fit_and_constant_column():
    X = np.array([[1.0, 5.0], [3.0, 5.0]])
    standardization = Standardization.fit(X)

    assert standardization.scale.tolist() == [1.0, 1.0]
    assert standardization.transform(X).tolist() == [[-1.0, 0.0], [1.0, 0.0]]


def test_target_transform_round_trip():
    transform = TargetTransform.fit([2.0, 4.0, 6.0])

    assert transform.transform([2.0, 6.0]).tolist() == [0.0, 1.0]
    assert transform.inverse(transform.transform([3.0])).tolist() == [3.0]


def test_encode_targets_per_task():
    assert encode_targets("binary", [0, 1]).tolist() == [[0.0], [1.0]]
    assert encode_targets("multiclass", [2, 0], n_classes=3).tolist() == [
        [0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0],
    ]
    with pytest.raises(ValueError):
        encode_targets("ranking", [0])


def test_predict_maps_class_labels_and_clamps_probabilities():
    model = GrbfnnModel(
        weights=[[2.0]],
        factor=PrecisionFactor.isotropic(1),
        centers=[[0.0]],
        center_mode="unsupervised",
        standardization=Standardization.identity(1),
        task="binary",
        class_labels=(-1, 1),
    )
    X = np.array([[0.0], [5.0]])

    assert predict(model, X).tolist() == [1, -1]
    assert predict_proba(model, X)[0, 0] == 1.0


def test_regression_predictions_are_denormalized():
    model = GrbfnnModel(
        weights=[[1.0]],
        factor=PrecisionFactor.isotropic(1),
        centers=[[0.0]],
        center_mode="unsupervised",
        standardization=Standardization.identity(1),
        target_transform=TargetTransform(minimum=10.0, maximum=20.0),
    )

    assert predict(model, [[0.0]])[0] == pytest.approx(20.0)


def test_model_file_round_trip(tmp_path, supervised_instance):
    model, X, _ = supervised_instance
    path = save_model(model, tmp_path / "model.json")

    loaded = load_model(path)

    assert np.array_equal(loaded.weights, model.weights)
    assert np.array_equal(loaded.factor.u, model.factor.u)
    assert np.array_equal(loaded.centers, model.centers)
    assert loaded.center_mode == model.center_mode
    assert np.array_equal(forward(loaded, X), forward(model, X))


def test_load_model_rejects_foreign_documents(tmp_path):
    path = tmp_path / "other.json"
    path.write_text('{"format": "something-else"}', encoding="utf-8")

    with pytest.raises(ValueError, match="Not a grbf-spectrum model"):
        load_model(path)
    with pytest.raises(FileNotFoundError):
        load_model(tmp_path / "missing.json")
