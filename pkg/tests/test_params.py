"""Parameter calculus: epsilon extension, slopes, conversions, constraint."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from parquiver import params
from parquiver.charring import weyl_dim
from parquiver.errors import DomainError
from parquiver.parabolic import build_parabolic
from parquiver.rootsys import RootSystem


def P2():
    return build_parabolic(RootSystem("A2"), {1})


def borel(series):
    rs = RootSystem(series)
    return build_parabolic(rs, "all")


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
pos_rationals = st.fractions(min_value=Fraction(1, 12), max_value=12, max_denominator=12)


# ---------------------------------------------------------------------------
# epsilon


def test_extend_epsilon_p2_single_parameter():
    P = P2()
    e = Fraction(3, 2)
    ext = params.extend_epsilon(P, {1: e})
    # both nilradical-opposite roots inherit the same value
    assert ext == {(0, 1): e, (1, 1): e}


def test_extend_epsilon_keeps_simple_values():
    P = borel("A2")
    ext = params.extend_epsilon(P, {0: 2, 1: 5})
    assert ext[(1, 0)] == 2
    assert ext[(0, 1)] == 5
    assert ext[(1, 1)] == 7  # highest root pairs once with each fundamental weight


def test_extend_epsilon_product_identity():
    P = borel("A1xA1xA1")
    ext = params.extend_epsilon(P, {0: 1, 1: 2, 2: 3})
    assert ext == {(1, 0, 0): 1, (0, 1, 0): 2, (0, 0, 1): 3}


def test_extend_epsilon_b2_doubles_on_short_coroot():
    rs = RootSystem("B2")
    P = build_parabolic(rs, {0})
    ext = params.extend_epsilon(P, {0: Fraction(1)})
    assert ext[(1, 0)] == 1
    assert ext[(1, 1)] == 2  # coroot coordinates (2, 1)
    assert ext[(1, 2)] == 1  # coroot coordinates (1, 1)


def test_epsilon_validation():
    P = P2()
    with pytest.raises(DomainError):
        params.extend_epsilon(P, {1: 0})
    with pytest.raises(DomainError):
        params.extend_epsilon(P, {1: -2})
    with pytest.raises(DomainError):
        params.extend_epsilon(P, {})
    with pytest.raises(DomainError):
        params.extend_epsilon(P, {0: 1, 1: 1})


# ---------------------------------------------------------------------------
# slopes


def test_slope_p2_closed_form():
    P = P2()
    e = Fraction(2)
    for l1 in range(0, 4):
        for l2 in range(-4, 4):
            lam = (l1, l2)
            assert params.slope_O(P, {1: e}, lam) == Fraction(l1 + 2 * l2, 1) / e
            # same thing in the x presentation
            x1, x2 = l1 - l2, -2 * l1 - l2
            assert params.slope_O(P, {1: e}, lam) == Fraction(-(x1 + x2), 1) / e


def test_slope_product_of_lines_closed_form():
    P = borel("A1xA1xA1")
    eps = {0: Fraction(1), 1: Fraction(2), 2: Fraction(5, 2)}
    rng = random.Random(11)
    for _ in range(25):
        lam = tuple(rng.randrange(-6, 7) for _ in range(3))
        expect = sum(Fraction(li, 1) / eps[i] for i, li in enumerate(lam))
        assert params.slope_O(P, eps, lam) == expect


def test_slope_zero_weight():
    assert params.slope_O(P2(), {1: 7}, (0, 0)) == 0


def test_slope_rejects_nondominant():
    with pytest.raises(DomainError):
        params.slope_O(P2(), {1: 1}, (-1, 0))


@settings(max_examples=60, deadline=None)
@given(e=pos_rationals,
       l1=st.integers(0, 5), l2=st.integers(-5, 5),
       m1=st.integers(0, 5), m2=st.integers(-5, 5))
def test_slope_additive(e, l1, l2, m1, m2):
    P = P2()
    a, b = (l1, l2), (m1, m2)
    s = (l1 + m1, l2 + m2)
    assert params.slope_O(P, {1: e}, s) == (
        params.slope_O(P, {1: e}, a) + params.slope_O(P, {1: e}, b))


# ---------------------------------------------------------------------------
# tau <-> tau'


def test_tauprime_product_of_lines():
    P = borel("A1xA1")
    eps = {0: Fraction(2), 1: Fraction(3)}
    rng = random.Random(5)
    for _ in range(100):
        lam = (rng.randrange(-6, 7), rng.randrange(-6, 7))
        t = Fraction(rng.randrange(-20, 20), rng.randrange(1, 9))
        tp = params.tau_to_tauprime(P, eps, {lam: t})[lam]
        assert tp == t - (Fraction(lam[0]) / 2 + Fraction(lam[1]) / 3)


def test_tauprime_line_chain():
    # single projective line, weights 2i: tau'_i = tau_i - 2i/eps
    P = borel("A1")
    e = Fraction(5, 3)
    tau = {(2 * i,): Fraction(i + 1, 2) for i in range(4)}
    tp = params.tau_to_tauprime(P, {0: e}, tau)
    for i in range(4):
        assert tp[(2 * i,)] == Fraction(i + 1, 2) - 2 * i / e


def test_tauprime_scales_by_dimension():
    P = P2()
    lam = (2, -1)  # three-dimensional Levi module
    assert weyl_dim(P, lam) == 3
    tp = params.tau_to_tauprime(P, {1: Fraction(1)}, {lam: Fraction(4)})
    assert tp[lam] == 3 * (4 - 0)  # slope of (2,-1) is 2 + 2*(-1) = 0


def test_zero_weight_fixed_point():
    P = borel("A2")
    tp = params.tau_to_tauprime(P, {0: 1, 1: 1}, {(0, 0): Fraction(7, 3)})
    assert tp[(0, 0)] == Fraction(7, 3)


@settings(max_examples=60, deadline=None)
@given(t=rationals, e=pos_rationals, l1=st.integers(0, 4), l2=st.integers(-4, 4))
def test_tau_roundtrip(t, e, l1, l2):
    P = P2()
    lam = (l1, l2)
    tp = params.tau_to_tauprime(P, {1: e}, {lam: t})
    back = params.tauprime_to_tau(P, {1: e}, tp)
    assert back[lam] == t


# ---------------------------------------------------------------------------
# sigma


def test_sigma_to_tauprime_and_back():
    P = borel("A1")
    e = {0: Fraction(4, 3)}
    order = [(0,), (2,), (4,), (6,)]
    sigma = [Fraction(1), Fraction(1, 2), Fraction(3)]
    tp = params.sigma_to_tauprime(P, e, sigma, order)
    assert params.tauprime_to_sigma(P, e, tp, order) == sigma
    # chain identity: sigma_i = tau'_{i+1} - tau'_i + 2/eps
    for i in range(3):
        lhs = sigma[i]
        rhs = tp[order[i + 1]] - tp[order[i]] + 2 / e[0]
        assert lhs == rhs


def test_sigma_single_vertex():
    P = P2()
    tp = params.sigma_to_tauprime(P, {1: Fraction(2)}, [], [(1, 0)])
    n = weyl_dim(P, (1, 0))
    assert tp[(1, 0)] == -n * params.slope_O(P, {1: Fraction(2)}, (1, 0))


def test_sigma_validation_and_warning():
    P = borel("A1")
    with pytest.raises(DomainError):
        params.sigma_to_tauprime(P, {0: 1}, [1], [(2,), (0,)])  # not ascending
    with pytest.raises(DomainError):
        params.sigma_to_tauprime(P, {0: 1}, [1, 1], [(0,), (2,)])  # wrong length
    with pytest.warns(UserWarning):
        params.sigma_to_tauprime(P, {0: 1}, [Fraction(-1)], [(0,), (2,)])


def test_sigma_uses_quiver_vertex_order():
    # ascending means ascending in the quiver sense (Sigma-height first)
    P = P2()
    order = [(0, -1), (1, 1)]  # heights: -1 < ... wait keys decide
    k0, k1 = P.vertex_key(order[0]), P.vertex_key(order[1])
    assert k0 < k1
    tp = params.sigma_to_tauprime(P, {1: 1}, [Fraction(2)], order)
    assert set(tp) == set(order)


# ---------------------------------------------------------------------------
# constraint, degrees


def test_check_constraint_examples():
    ok, res = params.check_constraint([1, 2], [2, 1], 4)
    assert ok and res == 0
    ok, res = params.check_constraint([1, 2], [2, 1], 5)
    assert not ok and res == 1
    with pytest.raises(DomainError):
        params.check_constraint([1], [1, 2], 0)


def test_check_constraint_common_slope():
    # all tau equal to the slope of F: holds whenever ranks sum to rk(F)
    rng = random.Random(3)
    for _ in range(20):
        ranks = [rng.randrange(1, 5) for _ in range(4)]
        deg = Fraction(rng.randrange(-10, 10))
        mu = deg / sum(ranks)
        ok, res = params.check_constraint([mu] * 4, ranks, deg)
        assert ok and res == 0


def test_product_degree_examples():
    P = P2()
    assert params.product_degree(P, {1: 1}, (1, 0), 0, 0) == (0, 0)
    # whole-group trivial twist
    PB = borel("A2")
    assert params.product_degree(PB, {0: 1, 1: 1}, (0, 0), 3, Fraction(5, 2)) == (
        3, Fraction(5, 2))
    # x = (3,0) <-> fundamental coordinates (1,-2): n = 2, slope -3
    lam = (1, -2)
    assert params.product_degree(P, {1: 1}, lam, 1, 0) == (2, -6)


def test_product_degree_rejects_negative_rank():
    with pytest.raises(DomainError):
        params.product_degree(P2(), {1: 1}, (0, 0), -1, 0)


def test_sigma_degree_one_step():
    # two-step filtration: deg_sigma = deg F + sigma_0 rk(F_0)
    assert params.sigma_degree([Fraction(2)], [3, 5], 7) == 7 + 2 * 3
    assert params.sigma_degree([], [4], 9) == 9
    with pytest.raises(DomainError):
        params.sigma_degree([1, 2], [3, 5], 0)
    assert params.sigma_slope([Fraction(2)], [3, 5], 7) == Fraction(13, 5)


# ---------------------------------------------------------------------------
# the conversion-consistency identity


def _random_ascending_vertices(P, rng, count):
    if P.rs.rank == 2:
        pool = [(a, b) for a in range(0, 4) for b in range(-4, 4)
                if P.is_dominant((a, b))]
    else:
        pool = [(a,) for a in range(-4, 8, 2)]
    rng.shuffle(pool)
    vs = sorted(set(pool[:count]), key=P.vertex_key)
    # vertex keys are unique per weight, so sorted-dedup is strictly ascending
    return vs


def _mu_tauprime(P, tau_prime, data):
    num = sum(weyl_dim(P, lam) * d - tau_prime[lam] * r
              for lam, (r, d) in data.items())
    den = sum(weyl_dim(P, lam) * r for lam, (r, d) in data.items())
    return num / den


@pytest.mark.parametrize("maker", [
    lambda: P2(),
    lambda: borel("A1xA1"),
    lambda: build_parabolic(RootSystem("B2"), {0}),
])
def test_conversion_consistency_identity(maker):
    P = maker()
    rng = random.Random(hash(P.rs.series) % 1000)
    eps = {i: Fraction(rng.randrange(1, 7), rng.randrange(1, 4)) for i in P.sigma}
    for _ in range(40):
        verts = _random_ascending_vertices(P, rng, rng.randrange(2, 5))
        if len(verts) < 2:
            continue
        m = len(verts) - 1
        sigma = [Fraction(rng.randrange(1, 9), rng.randrange(1, 5)) for _ in range(m)]
        tau_prime = params.sigma_to_tauprime(P, eps, sigma, verts)
        # random subobject data: per-vertex rank and degree
        data = {lam: (Fraction(rng.randrange(0, 4)), Fraction(rng.randrange(-6, 7)))
                for lam in verts}
        if all(r == 0 for r, _ in data.values()):
            data[verts[0]] = (Fraction(1), data[verts[0]][1])
        # left side: assemble the induced filtration and take its sigma-slope
        step_ranks, deg_F = [], Fraction(0)
        running = Fraction(0)
        for lam in verts:
            r, d = data[lam]
            rk, dg = params.product_degree(P, eps, lam, r, d)
            running += rk
            step_ranks.append(running)
            deg_F += dg
        lhs = params.sigma_slope(sigma, step_ranks, deg_F)
        # right side: quiver-level slope plus the sigma total
        rhs = _mu_tauprime(P, tau_prime, data) + sum(sigma)
        assert lhs == rhs


# ---------------------------------------------------------------------------
# the two-vertex special case


def test_triple_epsilon_closed_form():
    rng = random.Random(9)
    for _ in range(50):
        rk0, rk1 = rng.randrange(1, 5), rng.randrange(1, 5)
        d0, d1 = Fraction(rng.randrange(-6, 7)), Fraction(rng.randrange(-6, 7))
        t0 = Fraction(rng.randrange(-8, 9), rng.randrange(1, 4))
        denom = (rk0 + rk1) * t0 - (d0 + d1)
        if denom <= 0:
            with pytest.raises(DomainError):
                params.triple_epsilon(rk0, d0, rk1, d1, t0)
            continue
        eps = params.triple_epsilon(rk0, d0, rk1, d1, t0)
        assert eps == 2 * Fraction(rk1) / denom
        _, (tp0, tp1) = params.triple_tau_primes(rk0, d0, rk1, d1, t0)
        assert tp0 - tp1 == 2 / eps
        # trace constraint at the quiver level
        assert d0 + d1 == tp0 * rk0 + tp1 * rk1


def test_triple_matches_line_conversion():
    # same answer through the generic machinery on the weight-0/2 chain
    P = borel("A1")
    rk0, d0, rk1, d1 = 2, Fraction(-1), 1, Fraction(2)
    t0 = Fraction(3)
    eps, (tp0, tp1) = params.triple_tau_primes(rk0, d0, rk1, d1, t0)
    generic = params.tau_to_tauprime(P, {0: eps}, {(0,): t0, (2,): t0})
    assert generic[(0,)] == tp0
    assert generic[(2,)] == tp1


# ---------------------------------------------------------------------------
# parameter files


def test_parse_param_file():
    text = """
    # kaehler data
    epsilon.a1 = 3/2
    tau.(1,0) = -2
    tau.(0,1) = 5/3
    sigma.0 = 1
    """
    d = params.parse_param_file(text)
    assert d["epsilon"] == {"a1": Fraction(3, 2)}
    assert d["tau"] == {(1, 0): Fraction(-2), (0, 1): Fraction(5, 3)}
    assert d["sigma"] == {0: Fraction(1)}


def test_parse_param_file_errors():
    for bad in ["epsilon.a1 3", "noprefix = 1", "what.x = 1",
                "sigma.x = 1", "tau.(1,0) = noodles",
                "epsilon.a1 = 1\nepsilon.a1 = 2"]:
        with pytest.raises(DomainError):
            params.parse_param_file(bad)


def test_parse_weight_forms():
    assert params.parse_weight("(1,-2)") == (1, -2)
    assert params.parse_weight("1, -2") == (1, -2)
    with pytest.raises(DomainError):
        params.parse_weight("(a,b)")


def test_epsilon_from_labels():
    P = borel("A2")
    got = params.epsilon_from_labels(P, {"a1": 1, "alpha2": "3/2"})
    assert got == {0: Fraction(1), 1: Fraction(3, 2)}
    with pytest.raises(DomainError):
        params.epsilon_from_labels(P, {"b1": 1})
    with pytest.raises(DomainError):
        params.epsilon_from_labels(P2(), {"a1": 1})  # a1 is a Levi node here
