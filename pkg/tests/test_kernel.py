import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from towerlab._kernel import naive_polymul, polymul


@st.composite
def arrays(draw, ndim):
    shape = tuple(draw(st.integers(1, 5)) for _ in range(ndim))
    big = draw(st.sampled_from([10, 2**70, 2**200]))
    vals = draw(st.lists(st.integers(0, big), min_size=int(np.prod(shape)), max_size=int(np.prod(shape))))
    return np.array(vals, dtype=object).reshape(shape)


@given(st.integers(1, 3).flatmap(lambda d: st.tuples(arrays(d), arrays(d))))
def test_kronecker_matches_schoolbook(pair):
    a, b = pair
    assert np.array_equal(polymul(a, b), naive_polymul(a, b))


def test_crop():
    a = np.array([1, 2, 3], dtype=object)
    b = np.array([4, 5], dtype=object)
    assert list(polymul(a, b, crop=(2,))) == [4, 13]


def test_zero_operand():
    a = np.zeros(3, dtype=object)
    b = np.array([1, 1], dtype=object)
    assert list(polymul(a, b)) == [0, 0, 0, 0]
