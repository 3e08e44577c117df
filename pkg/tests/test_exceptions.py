#!/usr/bin/env python3
"""
Tests for custom exception hierarchy.

Tests each exception class instantiation, inheritance, and message formatting.
"""

import pytest

from tools.lib.exceptions import (
    ActionIndexError,
    AggregationError,
    DreMarlError,
    EpisodeFinishedError,
    NumericalError,
    RewardSettingError,
    RunFailedError,
    ScenarioError,
    ShapeMismatchError,
)


class TestExceptionHierarchy:
    """Test custom exception inheritance"""

    def test_all_exceptions_inherit_from_dremarl_error(self):
        """Verify all custom exceptions inherit from DreMarlError"""
        exceptions = [
            NumericalError("loss"),
            ShapeMismatchError("width", 3, 4),
            ScenarioError("tag"),
            EpisodeFinishedError("done"),
            ActionIndexError(7, 5),
            RewardSettingError("bad"),
            AggregationError("bad"),
            RunFailedError("cn-3", 0, "boom"),
        ]

        for exc in exceptions:
            assert isinstance(exc, DreMarlError)
            assert isinstance(exc, Exception)

    def test_builtin_bases(self):
        """Verify errors are also catchable as the matching builtin"""
        assert isinstance(NumericalError("x"), ArithmeticError)
        assert isinstance(ShapeMismatchError("x"), ValueError)
        assert isinstance(ScenarioError("x"), ValueError)
        assert isinstance(ActionIndexError(1, 1), IndexError)
        assert isinstance(RewardSettingError("x"), ValueError)
        assert isinstance(AggregationError("x"), ValueError)


class TestNumericalError:
    """Test NumericalError exception"""

    def test_message_without_detail(self):
        """Test the location appears in the message"""
        exc = NumericalError("softmax")
        assert exc.where == "softmax"
        assert str(exc) == "Non-finite values in softmax"

    def test_message_with_detail(self):
        """Test an optional detail is appended"""
        exc = NumericalError("Adam update of 'w'", "lr too large")
        assert str(exc) == "Non-finite values in Adam update of 'w': lr too large"


class TestShapeMismatchError:
    """Test ShapeMismatchError exception"""

    def test_expected_and_actual(self):
        """Test expected and actual shapes are recorded and shown"""
        exc = ShapeMismatchError("input width", 6, 8)
        assert exc.expected == 6
        assert exc.actual == 8
        assert str(exc) == "input width (expected 6, got 8)"

    def test_message_only(self):
        """Test a bare message stays unchanged"""
        assert str(ShapeMismatchError("loss must be a scalar")) == "loss must be a scalar"


class TestScenarioError:
    """Test ScenarioError exception"""

    def test_unknown_scenario(self):
        """Test the default message for an unknown scenario"""
        exc = ScenarioError("tag")
        assert exc.scenario == "tag"
        assert exc.agents is None
        assert str(exc) == "Unsupported scenario 'tag'"

    def test_unsupported_count(self):
        """Test the default message includes the agent count"""
        exc = ScenarioError("ref", 4)
        assert exc.agents == 4
        assert str(exc) == "Unsupported scenario 'ref' with 4 agents"

    def test_custom_message(self):
        """Test a custom message replaces the default"""
        assert str(ScenarioError("ref", 4, "Scenario 'ref' supports 2, 7, 10 agents, got 4")).endswith("got 4")


class TestActionIndexError:
    """Test ActionIndexError exception"""

    @pytest.mark.parametrize("index", [-1, 5, 12])
    def test_message(self, index):
        """Test the range appears in the message"""
        exc = ActionIndexError(index, 5)
        assert exc.index == index
        assert exc.num_actions == 5
        assert str(exc) == f"Action index {index} out of range [0, 5)"


class TestRunFailedError:
    """Test RunFailedError exception"""

    def test_attributes(self):
        """Test label, seed and cause are kept"""
        exc = RunFailedError("cn-3-dre-ss-ss-dete", 2, "NumericalError: loss")
        assert exc.label == "cn-3-dre-ss-ss-dete"
        assert exc.seed == 2
        assert exc.cause == "NumericalError: loss"
        assert str(exc) == "Run cn-3-dre-ss-ss-dete (seed 2) failed: NumericalError: loss"


class TestExceptionRaising:
    """Test raising and catching"""

    def test_raise_and_catch_base_exception(self):
        """Test catching a specific error through the base class"""
        with pytest.raises(DreMarlError):
            raise AggregationError("Policy weights must sum to 1")

    def test_exception_hierarchy_catch_order(self):
        """Test specific handlers run before the base handler"""
        try:
            raise NumericalError("critic loss")
        except NumericalError as e:
            caught = type(e).__name__
        except DreMarlError:
            caught = "DreMarlError"
        assert caught == "NumericalError"

    def test_chained_cause(self):
        """Test the original exception survives chaining"""
        original = FloatingPointError("overflow")
        with pytest.raises(NumericalError) as info:
            try:
                raise original
            except FloatingPointError as e:
                raise NumericalError("exp") from e
        assert info.value.__cause__ is original
