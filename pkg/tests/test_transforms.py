import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracspec import (
    ConfigError,
    TimeVertexSignal,
    TransformContext,
    forward,
    inverse,
    knn_graph,
    make_plan,
    path_graph,
    random_planar_points,
)


def kron_vec_oracle(plan, x):
    """Explicit (F_col kron F_row) vec(X) with column-major stacking."""
    n1, n2 = x.shape
    big = np.kron(plan.col_op.matrix, plan.row_op.matrix)
    return (big @ x.ravel(order="F")).reshape((n1, n2), order="F")


def random_signal(rng, n1, n2, complex_valued=True):
    data = rng.standard_normal((n1, n2))
    if complex_valued:
        data = data + 1j * rng.standard_normal((n1, n2))
    return TimeVertexSignal(data, real_flag=not complex_valued)


@pytest.fixture(scope="module")
def ctx():
    return TransformContext(knn_graph(random_planar_points(6, seed=1), 2), path_graph(4))


ALL_PLANS = [
    ("gfrft2d", (0.6,), None),
    ("gbfrft2d", (0.6, 0.3), None),
    ("jfrft", (0.6, 0.3), None),
    ("gcgfrft", (0.6, 0.3), 0.4),
]


class TestForwardInverse:
    def test_identity_plan_is_identity(self, ctx, rng):
        plan = ctx.plan("gbfrft2d", (0.0, 0.0))
        x = random_signal(rng, 6, 4)
        assert np.abs(forward(plan, x).data - x.data).max() <= 1e-12

    def test_unit_entry_maps_to_operator_columns(self, ctx):
        plan = ctx.plan("gbfrft2d", (0.7, 0.2))
        i, j = 2, 1
        e = np.zeros((6, 4))
        e[i, j] = 1.0
        out = forward(plan, TimeVertexSignal(e)).data
        want = np.outer(plan.row_op.matrix[:, i], plan.col_op.matrix[:, j])
        assert np.abs(out - want).max() <= 1e-12

    @pytest.mark.parametrize("family,orders,lam", ALL_PLANS)
    def test_kronecker_vec_identity(self, ctx, rng, family, orders, lam):
        plan = ctx.plan(family, orders, lam=lam)
        x = random_signal(rng, 6, 4)
        got = forward(plan, x).data
        want = kron_vec_oracle(plan, x.data)
        assert np.linalg.norm(got - want) <= 1e-10 * np.linalg.norm(want)

    @pytest.mark.parametrize("family,orders,lam", ALL_PLANS)
    def test_round_trip(self, ctx, rng, family, orders, lam):
        plan = ctx.plan(family, orders, lam=lam)
        x = random_signal(rng, 6, 4)
        back = inverse(plan, forward(plan, x))
        assert np.abs(back.data - x.data).max() <= 1e-10

    def test_inverse_via_negated_orders(self, ctx, rng):
        plan = ctx.plan("gbfrft2d", (0.6, 0.3))
        neg = ctx.plan("gbfrft2d", (-0.6, -0.3))
        x = random_signal(rng, 6, 4)
        xh = forward(plan, x)
        a = inverse(plan, xh).data
        b = forward(neg, xh).data
        assert np.linalg.norm(a - b) <= 1e-9 * np.linalg.norm(a)

    @pytest.mark.parametrize("family,orders,lam", ALL_PLANS)
    def test_parseval(self, ctx, rng, family, orders, lam):
        plan = ctx.plan(family, orders, lam=lam)
        x = random_signal(rng, 6, 4)
        assert abs(forward(plan, x).norm - x.norm) <= 1e-9 * x.norm

    def test_shape_mismatch_rejected(self, ctx, rng):
        plan = ctx.plan("gfrft2d", (0.5,))
        with pytest.raises(ValueError, match="shape"):
            forward(plan, random_signal(rng, 4, 6))

    @settings(max_examples=15, deadline=None)
    @given(seed=st.integers(0, 10_000), so=st.floats(-2, 2), to=st.floats(-2, 2))
    def test_round_trip_property(self, ctx, seed, so, to):
        srng = np.random.default_rng(seed)
        plan = ctx.plan("gbfrft2d", (so, to))
        x = random_signal(srng, 6, 4)
        back = inverse(plan, forward(plan, x))
        assert np.abs(back.data - x.data).max() <= 1e-9


class TestFamilyDegeneracy:
    def test_gbfrft2d_equal_orders_is_gfrft2d(self, ctx, rng):
        x = random_signal(rng, 6, 4)
        a = forward(ctx.plan("gbfrft2d", (0.8, 0.8)), x).data
        b = forward(ctx.plan("gfrft2d", (0.8,)), x).data
        assert np.linalg.norm(a - b) <= 1e-10 * np.linalg.norm(b)

    def test_gcgfrft_lambda0_is_gbfrft2d(self, ctx, rng):
        x = random_signal(rng, 6, 4)
        a = forward(ctx.plan("gcgfrft", (0.6, 0.3), lam=0.0), x).data
        b = forward(ctx.plan("gbfrft2d", (0.6, 0.3)), x).data
        assert np.linalg.norm(a - b) <= 1e-8 * np.linalg.norm(b)

    def test_gcgfrft_lambda1_is_jfrft(self, ctx, rng):
        x = random_signal(rng, 6, 4)
        a = forward(ctx.plan("gcgfrft", (0.6, 0.3), lam=1.0), x).data
        b = forward(ctx.plan("jfrft", (0.6, 0.3)), x).data
        assert np.linalg.norm(a - b) <= 1e-8 * np.linalg.norm(b)

    def test_2d_additivity(self, ctx, rng):
        x = random_signal(rng, 6, 4)
        two = forward(ctx.plan("gbfrft2d", (0.5, -0.2)),
                      forward(ctx.plan("gbfrft2d", (0.6, 0.3)), x)).data
        one = forward(ctx.plan("gbfrft2d", (1.1, 0.1)), x).data
        assert np.linalg.norm(two - one) <= 1e-8 * np.linalg.norm(one)


class TestPlanConstruction:
    def test_gfrft2d_rejects_two_distinct_orders(self, ctx):
        with pytest.raises(ConfigError):
            ctx.plan("gfrft2d", (0.5, 0.7))

    def test_gcgfrft_requires_lambda(self, ctx):
        with pytest.raises(ConfigError):
            ctx.plan("gcgfrft", (0.5, 0.5))

    def test_unknown_family_rejected(self, ctx):
        with pytest.raises(ConfigError):
            ctx.plan("nope", (0.5,))

    def test_make_plan_from_graphs(self, rng):
        plan = make_plan("gbfrft2d", path_graph(5), path_graph(3), (0.5, 0.5))
        assert plan.shape == (5, 3)
        x = random_signal(rng, 5, 3)
        assert np.abs(inverse(plan, forward(plan, x)).data - x.data).max() <= 1e-10

    def test_make_plan_jfrft_with_integer_size(self):
        plan = make_plan("jfrft", path_graph(5), 3, (0.5, 0.5))
        assert plan.shape == (5, 3)

    def test_coupling_cache_reused(self, ctx):
        d1 = ctx.coupling(0.37)
        d2 = ctx.coupling(0.37)
        assert d1 is d2


class TestTimeVertexSignal:
    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            TimeVertexSignal(np.array([[np.inf, 0.0]]))

    def test_real_flag_detection(self, rng):
        assert TimeVertexSignal.from_array(rng.standard_normal((2, 3))).real_flag
        assert not TimeVertexSignal.from_array(
            rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))).real_flag

    def test_vector_rejected(self):
        with pytest.raises(ValueError):
            TimeVertexSignal(np.zeros(4))
