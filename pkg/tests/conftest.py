import random

from hypothesis import HealthCheck, settings, strategies as st

from opg.oracle.generate import random_expr, random_nf

settings.register_profile("default", deadline=None, max_examples=60, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

EXITS = ["x1", "x2", "x3"]

seeds = st.integers(min_value=0, max_value=2**31 - 1)


@st.composite
def nfs(draw, exits=EXITS, max_priority=6):
    return random_nf(random.Random(draw(seeds)), exits, max_priority)


@st.composite
def exprs(draw, depth=4, mu=True):
    return random_expr(random.Random(draw(seeds)), draw(st.integers(0, depth)), EXITS, 6, mu)
