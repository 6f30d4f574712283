import math
import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wavecheck import (
    ParameterError,
    apply_Ah,
    build_grid,
    dot_dx,
    norm_dx,
    seminorm_Ah,
    space_index,
    time_index,
)
from wavecheck.errors import DomainError, NumericDomainError, ShapeError
from wavecheck.scalars import certified_sqrt_leq


def test_build_grid_binary64_steps():
    g = build_grid(0, 1, 1, 100, 200)
    assert g.dx == 0.01
    assert g.dt == 0.005


def test_build_grid_rejects_tiny_interval_counts():
    with pytest.raises(ParameterError, match="greater than one"):
        build_grid(0, 1, 1, 1, 10)
    with pytest.raises(ParameterError, match="greater than one"):
        build_grid(0, 1, 1, 10, 1)


def test_build_grid_rejects_empty_domains():
    with pytest.raises(ParameterError):
        build_grid(1, 1, 1, 10, 10)
    with pytest.raises(ParameterError):
        build_grid(0, 1, 0, 10, 10)


def test_build_grid_exact_rational_steps():
    g = build_grid(0, 1, 2, 4, 8, "exact")
    assert g.dx == Fr(1, 4)
    assert g.dt == Fr(1, 4)
    assert g.i_max * g.dx == g.x_max - g.x_min
    assert g.k_max * g.dt == g.t_max


def test_space_index_basics():
    g = build_grid(0, 1, 1, 100, 200)
    assert space_index(g, 0.0) == 0
    assert space_index(g, 0.015) == 1
    assert space_index(g, 1.0) == 100  # clamped right endpoint
    with pytest.raises(DomainError):
        space_index(g, 1.5)


def test_time_index_right_endpoint_matches_exact_floor():
    # Exact-rational oracle: floor(t_max / dt) == k_max on the exact grid,
    # and the clamp makes the binary64 grid agree.
    ge = build_grid(0, 1, Fr(7, 10), 25, 60, "exact")
    assert math.floor(ge.t_max / ge.dt) == 60
    assert time_index(ge, ge.t_max) == 60
    gb = build_grid(0, 1, 0.7, 25, 60)
    assert time_index(gb, 0.7) == 60


def test_index_maps_monotone():
    g = build_grid(0, 1, 1, 37, 53)
    xs = sorted(random.Random(7).uniform(0, 1) for _ in range(200))
    idx = [space_index(g, x) for x in xs]
    assert idx == sorted(idx)
    ts = sorted(random.Random(8).uniform(0, 1) for _ in range(200))
    kdx = [time_index(g, t) for t in ts]
    assert kdx == sorted(kdx)


def test_dot_dx_zero_vector():
    g = build_grid(0, 1, 1, 10, 10)
    q = [0.0] * 11
    assert dot_dx(q, q, g) == 0.0
    assert norm_dx(q, g) == 0.0


def test_dot_dx_single_interior_term():
    g = build_grid(0, 1, 1, 100, 200)
    q = [0.0] * 101
    q[1] = 1.0
    assert dot_dx(q, q, g) == pytest.approx(0.01, rel=1e-15)
    assert norm_dx(q, g) == pytest.approx(0.1, rel=1e-15)


def test_dot_dx_shape_error():
    g = build_grid(0, 1, 1, 10, 10)
    with pytest.raises(ShapeError):
        dot_dx([0.0] * 5, [0.0] * 11, g)


@st.composite
def exact_vectors(draw, length=9):
    vals = draw(st.lists(
        st.fractions(min_value=-5, max_value=5, max_denominator=16),
        min_size=length, max_size=length))
    return vals


@given(exact_vectors(), exact_vectors())
@settings(max_examples=30, deadline=None)
def test_dot_dx_commutes_exactly(q, r):
    g = build_grid(0, 1, 1, 8, 8, "exact")
    assert dot_dx(q, r, g) == dot_dx(r, q, g)


@given(exact_vectors(), st.fractions(min_value=-4, max_value=4, max_denominator=8))
@settings(max_examples=30, deadline=None)
def test_norm_absolutely_homogeneous_in_squares(q, alpha):
    g = build_grid(0, 1, 1, 8, 8, "exact")
    scaled = [alpha * v for v in q]
    assert dot_dx(scaled, scaled, g) == alpha * alpha * dot_dx(q, q, g)


def test_triangle_inequality_certified():
    g = build_grid(0, 1, 1, 12, 12, "exact")
    rng = random.Random(11)
    for _ in range(25):
        q = [Fr(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(13)]
        r = [Fr(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(13)]
        s = [a + b for a, b in zip(q, r)]
        assert certified_sqrt_leq(dot_dx(s, s, g), [dot_dx(q, q, g), dot_dx(r, r, g)])


def test_interior_sum_equals_inclusive_sum_for_zero_boundary():
    g = build_grid(0, 1, 1, 10, 10, "exact")
    rng = random.Random(3)
    for _ in range(20):
        q = [Fr(0)] + [Fr(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(9)] + [Fr(0)]
        inclusive = sum(v * v for v in q) * g.dx
        assert dot_dx(q, q, g) == inclusive


def test_apply_Ah_annihilates_affine():
    g = build_grid(0, 1, 1, 10, 10, "exact")
    const = [Fr(3)] * 11
    lin = [g.x(i) for i in range(11)]
    for q in (const, lin):
        out = apply_Ah(Fr(2), g, q)
        assert all(v == 0 for v in out[1:10])


def test_apply_Ah_quadratic_exact():
    g = build_grid(0, 1, 1, 8, 8, "exact")
    q = [g.x(i) ** 2 for i in range(9)]
    c = Fr(3, 2)
    out = apply_Ah(c, g, q)
    assert all(v == -2 * c * c for v in out[1:8])


def test_seminorm_Ah_negative_form_raises():
    # Nonzero boundary values break positive semidefiniteness.
    g = build_grid(0, 1, 1, 6, 6, "exact")
    q = [Fr(10), Fr(1), Fr(1), Fr(1), Fr(1), Fr(1), Fr(10)]
    with pytest.raises(NumericDomainError):
        seminorm_Ah(q, g, Fr(1))


def test_seminorm_Ah_zero_boundary_ok():
    g = build_grid(0, 1, 1, 6, 6, "exact")
    q = [Fr(0), Fr(1), Fr(2), Fr(3), Fr(2), Fr(1), Fr(0)]
    assert seminorm_Ah(q, g, Fr(1)) > 0


def test_binary64_dot_is_left_to_right():
    g = build_grid(0, 1, 1, 6, 6)
    q = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.0]
    r = [0.0, 1.7, -2.3, 3.1, -4.9, 5.3, 0.0]
    acc = 0.0
    for i in range(1, 6):
        acc += q[i] * r[i]
    assert dot_dx(q, r, g) == acc * g.dx


def test_exact_dot_is_order_independent_oracle():
    g = build_grid(0, 1, 1, 6, 6, "exact")
    q = [Fr(0), Fr(1, 3), Fr(2, 7), Fr(3, 5), Fr(4, 9), Fr(5, 11), Fr(0)]
    assert dot_dx(q, q, g) == sum(v * v for v in reversed(q)) * g.dx


def test_dot_Ah_symmetric_on_dirichlet_vectors():
    # Summation by parts: <A_h q, r> = <q, A_h r> when both vectors vanish
    # on the boundary.  This identity is what makes the energy algebra work.
    from wavecheck import dot_Ah

    g = build_grid(0, 1, 1, 9, 9, "exact")
    rng = random.Random(21)
    for _ in range(15):
        q = [Fr(0)] + [Fr(rng.randint(-9, 9), rng.randint(1, 7)) for _ in range(8)] + [Fr(0)]
        r = [Fr(0)] + [Fr(rng.randint(-9, 9), rng.randint(1, 7)) for _ in range(8)] + [Fr(0)]
        c = Fr(rng.randint(1, 5), rng.randint(1, 5))
        assert dot_Ah(q, r, g, c) == dot_Ah(r, q, g, c)


def test_space_index_exact_integer_quotients_floor_without_nudging():
    g = build_grid(0, 1, 1, 8, 8, "exact")
    for i in range(9):
        assert space_index(g, g.x(i)) == min(i, 8)
