import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qinfo import (
    ClassicalEnsemble,
    DensityOperator,
    PhaseSpaceSpec,
    ProbVector,
    QuantumEnsemble,
    RandomStream,
    StateVector,
    classical_density,
    density_operator,
    ensembles_equivalent,
    sample_unitary,
    spectral_decompose,
    uniform_quantum_ensemble,
)
from qinfo.ensembles import (
    NotPositiveSemidefinite,
    eigen_ensemble,
    ensemble_from_dict,
    ensemble_to_dict,
    load_ensemble,
    dump_ensemble,
    state_from_dict,
)
from qinfo.sampling import sample_pure_states

ROOT2 = np.sqrt(2.0)


def random_ensemble(seed, d, n):
    rng = RandomStream(seed)
    states = [StateVector(v) for v in sample_pure_states(d, n, rng)]
    return QuantumEnsemble(tuple(states), rng.generator.dirichlet(np.ones(n)))


def test_prob_vector_validation():
    ProbVector([0.5, 0.5])
    for bad in ([0.5, 0.6], [-0.1, 1.1], [], [np.nan, 1.0]):
        with pytest.raises(ValueError):
            ProbVector(bad)


def test_ensemble_validation(ket0):
    with pytest.raises(ValueError):
        QuantumEnsemble((), [])
    with pytest.raises(ValueError):
        QuantumEnsemble((ket0,), [0.5, 0.5])
    with pytest.raises(ValueError):
        QuantumEnsemble((ket0, StateVector.basis(3, 0)), [0.5, 0.5])


def test_density_operator_examples(ket0, ket_plus):
    rho = density_operator(QuantumEnsemble((ket0,), [1.0]))
    assert rho.matrix == pytest.approx(np.diag([1, 0]))
    rho = density_operator(QuantumEnsemble.equal_weights([ket0, ket_plus]))
    assert rho.matrix == pytest.approx(np.array([[0.75, 0.25], [0.25, 0.25]]))


def test_density_operator_of_haar_ensemble_is_maximally_mixed():
    e = uniform_quantum_ensemble(3, 100_000, RandomStream(21))
    assert np.linalg.norm(density_operator(e).matrix - np.eye(3) / 3) < 0.01


def test_density_operator_linear_in_probabilities(ket0, ket_plus):
    a = density_operator(QuantumEnsemble((ket0, ket_plus), [0.2, 0.8])).matrix
    b = 0.2 * ket0.projector() + 0.8 * ket_plus.projector()
    assert a == pytest.approx(b)


@given(seed=st.integers(0, 2**32), d=st.integers(1, 8), n=st.integers(1, 16))
def test_density_operator_invariants_and_reconstruction(seed, d, n):
    rho = density_operator(random_ensemble(seed, d, n))
    m = rho.matrix
    assert np.abs(m - m.conj().T).max() <= 1e-9
    assert abs(np.trace(m) - 1) <= 1e-9
    assert np.linalg.eigvalsh(m).min() >= -1e-9
    sd = spectral_decompose(rho)
    assert np.linalg.norm(sd.reconstruct() - m) <= 1e-8
    assert np.all(np.diff(sd.eigenvalues.probs) <= 1e-12)
    assert sd.eigenvalues.probs.sum() == pytest.approx(1.0)


def test_density_operator_rejects_bad_matrices():
    with pytest.raises(ValueError):
        DensityOperator([[0.5, 0.1], [0.2, 0.5]])
    with pytest.raises(ValueError):
        DensityOperator([[0.6, 0], [0, 0.6]])
    with pytest.raises(NotPositiveSemidefinite):
        DensityOperator([[1.1, 0], [0, -0.1]])


def test_spectral_examples(ket0, ket_plus):
    sd = spectral_decompose(DensityOperator(np.diag([1.0, 0.0])))
    assert sd.eigenvalues.probs == pytest.approx([1, 0])
    assert sd.eigenvectors.vectors == pytest.approx(np.eye(2))
    sd = spectral_decompose(density_operator(QuantumEnsemble.equal_weights([ket0, ket_plus])))
    # hand-solved characteristic polynomial: (2 +- sqrt 2) / 4
    assert sd.eigenvalues.probs == pytest.approx([(2 + ROOT2) / 4, (2 - ROOT2) / 4], abs=1e-12)
    sd = spectral_decompose(DensityOperator.maximally_mixed(5))
    assert sd.eigenvalues.probs == pytest.approx(np.full(5, 0.2))


def test_spectral_clamps_tiny_negative_eigenvalues():
    m = np.diag([1.0 + 5e-10, -5e-10])
    sd = spectral_decompose(DensityOperator(m))
    assert sd.eigenvalues.probs.min() >= 0
    assert sd.eigenvalues.probs.sum() == pytest.approx(1.0)


def test_spectral_decomposition_is_deterministic():
    e = random_ensemble(4, 5, 3)
    a = spectral_decompose(density_operator(e))
    b = spectral_decompose(density_operator(e))
    assert np.array_equal(a.eigenvectors.vectors, b.eigenvectors.vectors)


@given(seed=st.integers(0, 2**32), d=st.integers(1, 8))
def test_orthogonal_ensemble_spectrum_equals_probabilities(seed, d):
    rng = RandomStream(seed)
    u = sample_unitary(d, rng)
    p = rng.generator.dirichlet(np.ones(d))
    e = QuantumEnsemble(tuple(StateVector(u[:, i]) for i in range(d)), p)
    lam = spectral_decompose(density_operator(e)).eigenvalues.probs
    assert np.sort(lam) == pytest.approx(np.sort(p), abs=1e-9)


def test_equivalent_ensembles(ket0, ket1, ket_plus, ket_minus):
    assert ensembles_equivalent(QuantumEnsemble.equal_weights([ket0, ket1]),
                                QuantumEnsemble.equal_weights([ket_plus, ket_minus]))
    assert not ensembles_equivalent(QuantumEnsemble((ket0,), [1.0]), QuantumEnsemble((ket1,), [1.0]))
    e = random_ensemble(8, 3, 6)
    assert ensembles_equivalent(eigen_ensemble(density_operator(e)), e)


def test_classical_density():
    spec = PhaseSpaceSpec(2, 4.0, 1.0)
    e = ClassicalEnsemble.uniform(16, spec)
    dens = classical_density(e)
    assert dens == pytest.approx(np.full(16, 1 / spec.total_volume))
    one_hot = ClassicalEnsemble(16, np.eye(16)[3], spec)
    dens = classical_density(one_hot)
    assert dens[3] == pytest.approx(1 / spec.cell_volume)
    assert np.count_nonzero(dens) == 1
    assert (dens * spec.cell_volume).sum() == pytest.approx(1.0)
    with pytest.raises(ValueError):
        classical_density(ClassicalEnsemble.uniform(4))
    with pytest.raises(ValueError):
        ClassicalEnsemble.uniform(15, spec)


def test_uniform_ensemble_examples():
    e = uniform_quantum_ensemble(2, 1, RandomStream(1))
    assert len(e) == 1 and e.probs.probs[0] == 1
    a = uniform_quantum_ensemble(3, 10, RandomStream(2))
    b = uniform_quantum_ensemble(3, 10, RandomStream(2))
    assert np.array_equal(a.amplitude_matrix(), b.amplitude_matrix())


def test_uniform_ensemble_converges_at_root_n():
    errs = []
    for n in (100, 10_000):
        vals = [np.linalg.norm(density_operator(uniform_quantum_ensemble(2, n, RandomStream(s))).matrix
                               - np.eye(2) / 2) for s in range(10)]
        errs.append(np.mean(vals))
    # factor 100 in n -> about 10 in error
    assert 5 < errs[0] / errs[1] < 20


def test_json_round_trip(tmp_path, ket0, ket_plus):
    e = QuantumEnsemble((ket0, StateVector([0.6, 0.8j])), [0.3, 0.7])
    data = json.loads(json.dumps(ensemble_to_dict(e)))
    assert data["states"][1] == [[0.6, 0.0], [0.0, 0.8]]
    back = ensemble_from_dict(data)
    assert back.amplitude_matrix() == pytest.approx(e.amplitude_matrix())
    path = tmp_path / "e.json"
    dump_ensemble(e, path)
    assert load_ensemble(path).probs.probs == pytest.approx([0.3, 0.7])


def test_json_validation():
    with pytest.raises(ValueError):
        ensemble_from_dict({"dim": 2, "states": [[[1, 0], [0, 0]]], "probs": [0.4]})
    with pytest.raises(ValueError):
        ensemble_from_dict({"dim": 3, "states": [[[1, 0], [0, 0]]], "probs": [1.0]})
    with pytest.raises(ValueError):
        ensemble_from_dict({"states": []})
    assert state_from_dict({"amplitudes": [[0, 0], [0, 1]]}).amplitudes == pytest.approx([0, 1j])
