class LebmineError(Exception):
    pass


class IllTyped(LebmineError):
    def __init__(self, message: str, location=()):
        super().__init__(f"{message} at {list(location)}")
        self.location = tuple(location)


class ParseError(LebmineError):
    pass


class BudgetExhausted(LebmineError):
    pass


class UnassignedVariable(LebmineError):
    pass


class UnsupportedTerm(LebmineError):
    pass


class UnsupportedConstant(UnsupportedTerm):
    pass


class TypeMismatch(LebmineError):
    pass


class DanglingFreeVariable(LebmineError):
    pass


class NonEliminable(LebmineError):
    pass


class NonArithmetical(LebmineError):
    pass
