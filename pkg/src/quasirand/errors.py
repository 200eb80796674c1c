class BudgetExceededError(RuntimeError):
    """A computation would exceed its configured enumeration/storage budget."""


class KernelAnomalyError(ArithmeticError):
    """A numeric kernel produced a mathematically impossible value (bug signal)."""
