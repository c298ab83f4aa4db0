import math

import numpy as np
import pytest

from polyadnet.preference import PreferenceFunction, read_preference, write_preference


def test_table_window_and_values():
    f = PreferenceFunction.from_table({1: 1.0, 2: 4.0, 3: 9.0})
    assert (f.g, f.M) == (1, 3)
    assert f(2) == 4.0
    assert f(0) == 0.0
    assert f(4) == 0.0


def test_table_gap_rejected():
    with pytest.raises(ValueError):
        PreferenceFunction.from_table({1: 1.0, 3: 2.0})


@pytest.mark.parametrize("bad", [{}, {2: 0.0}, {2: -1.0}, {2: float("inf")}])
def test_table_bad_values_rejected(bad):
    with pytest.raises(ValueError):
        PreferenceFunction.from_table(bad)


def test_linear_is_identity_on_window():
    f = PreferenceFunction.linear()
    assert f(1) == 1.0
    assert f(17) == 17.0
    assert f(0) == 0.0
    assert math.isinf(f.M)


def test_linear_rejects_g_zero():
    # f(0)=0 is not a positive weight, so the window cannot start there
    with pytest.raises(ValueError):
        PreferenceFunction.linear(g=0)


def test_constant_window():
    f = PreferenceFunction.constant(2.5, g=0, M=5)
    assert f(0) == 2.5
    assert f(5) == 2.5
    assert f(6) == 0.0


def test_rule_with_finite_window():
    f = PreferenceFunction.from_rule(lambda k: np.asarray(k, float) ** 2, g=1, M=10)
    assert f(3) == 9.0
    assert f(11) == 0.0


def test_rule_probe_rejects_nonpositive():
    with pytest.raises(ValueError):
        PreferenceFunction.from_rule(lambda k: 0.0 * np.asarray(k, float), g=1)


def test_weight_array_matches_call():
    f = PreferenceFunction.linear(g=2, M=6)
    w = f.weight_array(9)
    assert w.shape == (10,)
    assert [f(k) for k in range(10)] == list(w)


def test_weight_array_python_rule_fallback():
    # rule that chokes on arrays still works through the scalar path
    f = PreferenceFunction.from_rule(lambda k: float(k) + 0.5, g=0, M=4)
    assert list(f.weight_array(4)) == [0.5, 1.5, 2.5, 3.5, 4.5]


def test_weights_property_table():
    tbl = {3: 1.0, 4: 2.0, 5: 0.25}
    f = PreferenceFunction.from_table(tbl)
    assert f.weights == tbl


def test_weights_property_unbounded_raises():
    f = PreferenceFunction.linear()
    with pytest.raises(ValueError):
        f.weights


def test_scaled_preserves_window():
    f = PreferenceFunction.from_table({1: 1.0, 2: 2.0})
    h = f.scaled(3.0)
    assert h(2) == 6.0
    assert (h.g, h.M) == (1, 2)
    with pytest.raises(ValueError):
        f.scaled(-1.0)


def test_immutability():
    f = PreferenceFunction.linear()
    with pytest.raises(AttributeError):
        f.g = 5


def test_equality_on_tables():
    f1 = PreferenceFunction.from_table({1: 1.0, 2: 2.0})
    f2 = PreferenceFunction.from_table({2: 2.0, 1: 1.0})
    assert f1 == f2


def test_write_read_round_trip(tmp_path):
    f = PreferenceFunction.from_table({2: 1.5, 3: 2.5, 4: 8.0})
    path = tmp_path / "pref.tsv"
    write_preference(f, path, {"note": "round trip"})
    back = read_preference(path)
    assert back == f
    assert (back.g, back.M) == (2, 4)


def test_write_unbounded_rejected(tmp_path):
    with pytest.raises(ValueError):
        write_preference(PreferenceFunction.linear(), tmp_path / "x.tsv")


def test_read_window_mismatch(tmp_path):
    path = tmp_path / "pref.tsv"
    path.write_text("# g=1\n# M=3\n1\t1.0\n2\t2.0\n")
    with pytest.raises(ValueError):
        read_preference(path)
