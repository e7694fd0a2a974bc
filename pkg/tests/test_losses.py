import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ordthresh import build_loss, is_convex_loss, load_custom_loss, load_loss_file


class TestBuildLoss:
    def test_absolute_row(self):
        loss = build_loss("absolute", 3)
        assert loss.table[0].tolist() == [0, 1, 2]

    def test_zero_one_row(self):
        loss = build_loss("zero_one", 3)
        assert loss.table[1].tolist() == [1, 0, 1]

    def test_squared_entry(self):
        loss = build_loss("squared", 4)
        assert loss.table[0, 3] == 9

    def test_aliases(self):
        assert build_loss("zo", 3).name == "zero_one"
        assert build_loss("abs", 3).name == "absolute"
        assert build_loss("sq", 3).name == "squared"

    def test_unknown_family(self):
        with pytest.raises(ValueError, match="unknown loss family"):
            build_loss("hinge", 3)

    def test_too_few_classes(self):
        with pytest.raises(ValueError, match="at least 2"):
            build_loss("absolute", 1)

    def test_deterministic(self):
        a, b = build_loss("squared", 6), build_loss("squared", 6)
        assert np.array_equal(a.table, b.table)

    def test_table_is_readonly(self):
        loss = build_loss("absolute", 3)
        with pytest.raises(ValueError):
            loss.table[0, 0] = 5.0


class TestCustomLoss:
    def test_valid_two_class(self):
        loss = load_custom_loss([[0, 1], [1, 0]])
        assert loss.name == "custom"
        assert loss.classes == 2

    def test_negative_entry(self):
        with pytest.raises(ValueError, match="nonnegative"):
            load_custom_loss([[0, 1], [-1, 0]])

    def test_not_square(self):
        with pytest.raises(ValueError, match="square"):
            load_custom_loss([[0, 1, 2], [1, 0, 1]])

    def test_nan_entry(self):
        with pytest.raises(ValueError, match="finite"):
            load_custom_loss([[0, np.nan], [1, 0]])

    def test_inf_entry(self):
        with pytest.raises(ValueError, match="finite"):
            load_custom_loss([[0, np.inf], [1, 0]])

    def test_call_is_one_based(self):
        loss = build_loss("absolute", 4)
        assert loss(1, 4) == 3.0


class TestLossFile:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "loss.csv"
        path.write_text("0,2\n1,0\n")
        loss = load_loss_file(path)
        assert loss.table.tolist() == [[0, 2], [1, 0]]

    def test_ragged(self, tmp_path):
        path = tmp_path / "loss.csv"
        path.write_text("0,2\n1\n")
        with pytest.raises(ValueError, match="ragged"):
            load_loss_file(path)

    def test_empty(self, tmp_path):
        path = tmp_path / "loss.csv"
        path.write_text("")
        with pytest.raises(ValueError, match="empty"):
            load_loss_file(path)


class TestConvexity:
    @pytest.mark.parametrize("family", ["absolute", "squared"])
    @pytest.mark.parametrize("classes", [3, 4, 5, 7])
    def test_v_shaped_families_are_convex(self, family, classes):
        assert is_convex_loss(build_loss(family, classes))

    @pytest.mark.parametrize("classes", [3, 4, 5])
    def test_zero_one_is_not_convex(self, classes):
        # second difference at k=1, l=1: 0 - 2*1 + 1 = -1
        assert not is_convex_loss(build_loss("zero_one", classes))

    def test_two_classes_vacuously_convex(self):
        assert is_convex_loss(build_loss("zero_one", 2))

    @given(
        classes=st.integers(3, 6),
        seed=st.integers(0, 10_000),
        shift_seed=st.integers(0, 10_000),
    )
    def test_column_shift_invariance(self, classes, seed, shift_seed):
        # adding a constant to each column cannot change second differences
        rng = np.random.default_rng(seed)
        table = rng.integers(0, 9, size=(classes, classes)).astype(float)
        loss = load_custom_loss(table)
        shifts = np.random.default_rng(shift_seed).integers(0, 7, size=classes)
        shifted = load_custom_loss(table + shifts[None, :])
        assert is_convex_loss(loss) == is_convex_loss(shifted)
