class PigError(Exception):
    pass


class ParseError(PigError):
    def __init__(self, line: int, expected: str, found: str):
        self.line = line
        self.expected = expected
        self.found = found
        super().__init__(f"line {line}: expected {expected}, found {found}")


class UnboundRelation(PigError):
    def __init__(self, name: str, statement_index=None):
        self.name = name
        self.statement_index = statement_index
        where = f" (statement {statement_index})" if statement_index is not None else ""
        super().__init__(f"relation {name!r} is not bound{where}")


class ArityError(PigError):
    def __init__(self, line_number: int, expected: int, found: int):
        self.line_number = line_number
        super().__init__(f"line {line_number}: expected {expected} fields, found {found}")


class PigTypeError(PigError):
    def __init__(self, message: str, line_number=None, column=None):
        self.line_number = line_number
        self.column = column
        super().__init__(message)


class SchemaMismatch(PigError):
    pass


class NoSuchColumn(PigError):
    def __init__(self, column: str, available):
        self.column = column
        super().__init__(f"no column {column!r} in ({', '.join(available)})")


class BadPattern(PigError):
    pass


class ExecutionError(PigError):
    def __init__(self, statement_index: int, cause: BaseException):
        self.statement_index = statement_index
        self.cause = cause
        super().__init__(f"statement {statement_index}: {cause}")
