import numpy as np
import pytest

from nctorus import (
    FourierElement,
    PlanckParam,
    QuantumHamiltonian,
    conjugation_evolve,
    deformed_mul,
    exp_deformed,
    heisenberg_evolve,
    isometry_defect,
    unitary_propagator,
)
from nctorus.errors import RealityError

e = FourierElement.character
unit = FourierElement.unit


class TestQuantumHamiltonian:
    def test_scaled_generator(self, shear_hamiltonian):
        qh = QuantumHamiltonian(shear_hamiltonian, PlanckParam(0.1))
        assert qh.scaled.coefficient((1, 0)) == pytest.approx(-np.pi / 0.1)

    def test_float_coercion(self, shear_hamiltonian):
        qh = QuantumHamiltonian(shear_hamiltonian, 0.05)
        assert isinstance(qh.hbar, PlanckParam)

    def test_rejects_zero_hbar(self, shear_hamiltonian):
        with pytest.raises(ValueError):
            QuantumHamiltonian(shear_hamiltonian, 0.0)

    def test_rejects_complex_hamiltonian(self):
        with pytest.raises(RealityError):
            QuantumHamiltonian(e((1, 0)), 0.1)


class TestExpDeformed:
    def test_exp_of_zero(self, J):
        res = exp_deformed(FourierElement.zero(2), 0.1, J)
        assert res.element == unit()
        assert res.steps <= 1  # the degree-1 term vanishes and ends the series

    def test_exp_of_scalar(self, J):
        # exp of c * unit is e^c * unit for any hbar
        c = 0.3 + 0.4j
        res = exp_deformed(c * unit(), 0.2, J)
        assert (res.element - np.exp(c) * unit()).l1() < 1e-12

    def test_single_character_phase(self, J):
        # e_p is unitary; exp(i s e_p) has l1 norm cosh-bounded and the
        # mode-0 coefficient sum_k (i s)^{2k} cocycle-powers
        res = exp_deformed(0.5j * e((1, 0)), 0.1, J, trunc_radius=32)
        # powers of e_{(1,0)} stay on the (n, 0) line with trivial cocycle
        assert res.element.coefficient((2, 0)) == pytest.approx((0.5j) ** 2 / 2)
        assert res.discarded_mass < 1e-12


class TestPropagator:
    def test_zero_time(self, J, shear_hamiltonian):
        qh = QuantumHamiltonian(shear_hamiltonian, 0.1)
        res = unitary_propagator(qh, 0.0, J)
        assert res.element == unit()

    def test_group_inverse(self, J, shear_hamiltonian):
        # u_t x_h u_{-t} = 1
        qh = QuantumHamiltonian(shear_hamiltonian, 0.2)
        t = 0.1
        up = unitary_propagator(qh, t, J).element
        um = unitary_propagator(qh, -t, J).element
        prod = deformed_mul(up, um, 0.2, J, cap=256)
        assert (prod - unit()).l1() < 1e-9

    def test_unitarity(self, J, shear_hamiltonian):
        # u_t* = u_{-t} because H is real (self-adjoint generator)
        qh = QuantumHamiltonian(shear_hamiltonian, 0.2)
        up = unitary_propagator(qh, 0.1, J).element
        um = unitary_propagator(qh, -0.1, J).element
        assert (up.star() - um).l1() < 1e-10


class TestConjugationEvolve:
    def test_unit_is_fixed(self, J, shear_hamiltonian):
        qh = QuantumHamiltonian(shear_hamiltonian, 0.2)
        res = conjugation_evolve(unit(), qh, 0.1, J)
        assert (res.element - unit()).l1() < 1e-9

    def test_hamiltonian_is_fixed(self, J, shear_hamiltonian):
        # H commutes with its own propagator
        qh = QuantumHamiltonian(shear_hamiltonian, 0.2)
        res = conjugation_evolve(shear_hamiltonian, qh, 0.1, J)
        assert (res.element - shear_hamiltonian).l1() < 1e-8


class TestHeisenbergEvolve:
    def test_zero_generator_cases(self, J, shear_hamiltonian):
        qh = QuantumHamiltonian(shear_hamiltonian, 0.1)
        res = heisenberg_evolve(shear_hamiltonian, qh, 0.3, J, steps=50)
        assert (res.element - shear_hamiltonian).l1() < 1e-12
        res_u = heisenberg_evolve(unit(), qh, 0.3, J, steps=50)
        assert (res_u.element - unit()).l1() < 1e-12

    def test_requires_steps(self, J, shear_hamiltonian):
        qh = QuantumHamiltonian(shear_hamiltonian, 0.1)
        with pytest.raises(ValueError):
            heisenberg_evolve(e((0, 1)), qh, 0.1, J, steps=0)

    def test_agrees_with_conjugation(self, J, shear_hamiltonian):
        # independent series-conjugation cross-check at moderate hbar;
        # observable-ODE step 2.5e-4 leaves ~1e-7 integrator error
        qh = QuantumHamiltonian(shear_hamiltonian, 0.2)
        t = 0.1
        ode = heisenberg_evolve(e((0, 1)), qh, t, J, steps=400, trunc_radius=24)
        conj = conjugation_evolve(e((0, 1)), qh, t, J, trunc_radius=24)
        diff = (ode.element - conj.element.truncate(24)[0]).l1()
        assert diff < 1e-6

    def test_preserves_self_adjointness(self, J, shear_hamiltonian):
        qh = QuantumHamiltonian(shear_hamiltonian, 0.1)
        f = e((0, 1)) + e((0, -1))  # real observable
        res = heisenberg_evolve(f, qh, 0.2, J, steps=200, trunc_radius=40)
        assert res.element.is_real(1e-8)

    def test_linearity(self, J, shear_hamiltonian):
        qh = QuantumHamiltonian(shear_hamiltonian, 0.1)
        f, g = e((0, 1)), e((1, 1))
        a = heisenberg_evolve(f, qh, 0.1, J, steps=100, trunc_radius=24).element
        b = heisenberg_evolve(g, qh, 0.1, J, steps=100, trunc_radius=24).element
        ab = heisenberg_evolve(f + 2.0 * g, qh, 0.1, J, steps=100, trunc_radius=24).element
        assert (ab - (a + 2.0 * b)).l1() < 1e-10


class TestAutomorphismProperties:
    def test_multiplicative_on_product(self, J, shear_hamiltonian):
        # beta_t(f x_h g) = beta_t(f) x_h beta_t(g), exact for conjugation
        h = 0.2
        qh = QuantumHamiltonian(shear_hamiltonian, h)
        t = 0.1
        f, g = e((0, 1)), e((1, 0))
        bf = conjugation_evolve(f, qh, t, J).element
        bg = conjugation_evolve(g, qh, t, J).element
        bfg = conjugation_evolve(deformed_mul(f, g, h, J), qh, t, J).element
        assert (deformed_mul(bf, bg, h, J, cap=512) - bfg).l1() < 1e-7

    def test_star_compatibility(self, J, shear_hamiltonian):
        h = 0.2
        qh = QuantumHamiltonian(shear_hamiltonian, h)
        f = e((0, 1)) + 0.5j * e((1, -1))
        bf = conjugation_evolve(f, qh, 0.1, J).element
        bfs = conjugation_evolve(f.star(), qh, 0.1, J).element
        assert (bf.star() - bfs).l1() < 1e-8

    def test_flow_property_in_time(self, J, shear_hamiltonian):
        qh = QuantumHamiltonian(shear_hamiltonian, 0.1)
        f = e((0, 1))
        once = heisenberg_evolve(f, qh, 0.2, J, steps=200, trunc_radius=32).element
        half = heisenberg_evolve(f, qh, 0.1, J, steps=100, trunc_radius=32).element
        twice = heisenberg_evolve(half, qh, 0.1, J, steps=100, trunc_radius=32).element
        assert (once - twice).l1() < 1e-8


class TestIsometryDefect:
    def test_small_for_character(self, J, shear_hamiltonian):
        qh = QuantumHamiltonian(shear_hamiltonian, 0.1)
        defect = isometry_defect(
            e((0, 1)), qh, 0.05, J, steps=50, trunc_radius=24, window=28
        )
        assert defect < 1e-2
