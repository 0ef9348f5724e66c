"""Exception hierarchy shared by the library and the command line."""


class BudgetingError(Exception):
    """Base class; ``code`` is the machine-greppable tag printed by the CLI."""

    code = "E_INTERNAL"


class ScenarioParseError(BudgetingError):
    code = "E_PARSE"

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MalformedBudgetError(BudgetingError):
    code = "E_BUDGET"


class UnsupportedPairingError(BudgetingError):
    code = "E_PAIRING"


class ResourceCapError(BudgetingError):
    code = "E_RESOURCE"


class InvalidPerturbationError(BudgetingError):
    code = "E_PERTURBATION"


class PreconditionError(BudgetingError):
    code = "E_PRECONDITION"
