"""
Exception hierarchy for the intermittency laboratory.

Every error derives from LabError plus the builtin a caller would naturally catch,
so library users can stay with ValueError/ArithmeticError while the CLI maps the
LabError family onto exit codes.
"""


class LabError(Exception):
    """Base class for all laboratory errors"""


class InvalidPointError(LabError, ValueError):
    """Homogeneous pair (0, 0) does not name a point of the sphere"""


class IndeterminateEvaluationError(LabError, ArithmeticError):
    """Both homogeneous forms vanished at the evaluation point"""


class ChartError(LabError, ValueError):
    """Affine-chart operation requested at a pole or at infinity"""


class InvalidParameterError(LabError, ValueError):
    """Parameter outside the admissible family range"""


class NotExpandableError(LabError, ValueError):
    """Map does not fix 0 or is not analytic there"""


class OrderMismatchError(LabError, ValueError):
    """Truncated series of different orders were combined"""


class KoenigsRegimeError(LabError, ValueError):
    """Multiplier modulus is 0 or 1, no Koenigs linearizer exists"""


class UndefinedStatisticError(LabError, ArithmeticError):
    """Statistic requested on data that cannot define it"""


class ScaleTooLargeError(LabError, ArithmeticError):
    """Series truncation error exceeded the tolerance at the probe scale"""


class DegenerateOrbitError(LabError, ValueError):
    """Experiment started on a distinguished point"""


class ObserverError(LabError, RuntimeError):
    """An orbit observer failed; carries the step index"""

    def __init__(self, step: int, observer: str, cause: Exception):
        self.step = step
        self.observer = observer
        self.cause = cause
        super().__init__(f"Observer {observer} failed at step {step}: {cause}")


class ConfigError(LabError, ValueError):
    """Run configuration missing, unreadable or not matching the schema"""


class HypothesisViolation(LabError):
    """Requested experiment lies outside the theorem hypotheses"""

    def __init__(self, message: str, report: dict):
        self.report = report
        super().__init__(message)
