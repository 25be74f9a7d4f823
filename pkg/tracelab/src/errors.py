class TracelabError(ValueError):
    pass


class InvalidOperandError(TracelabError):
    pass


class ConfigurationError(TracelabError):
    pass


class DegenerateDataError(TracelabError):
    pass


class InsufficientDataError(TracelabError):
    pass


class TraceFileFormatError(TracelabError):
    pass


class TraceFileCorruptionError(TracelabError):
    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset
