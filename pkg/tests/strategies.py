from hypothesis import assume
from hypothesis import strategies as st

from arxgen.model import GeneratorParams


@st.composite
def generator_params(draw):
    H = draw(st.floats(1.0, 10.0))
    R = draw(st.floats(0.02, 0.1))
    T = draw(st.floats(0.2, 1.0))
    # keep clear of the real-pole boundary 2T = HR
    assume(2.0 * T - H * R > 0.02 * T)
    return GeneratorParams(H, R, T)


sampling_intervals = st.sampled_from([0.1, 0.05, 0.01, 0.001])
