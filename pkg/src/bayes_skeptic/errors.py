"""Exception hierarchy shared by the library and the CLI."""


class CoinGameError(Exception):
    """Base class for every error raised by this package."""


class SpecError(CoinGameError, ValueError):
    """A strategy/reality spec string or run configuration could not be parsed."""


# game-core
class BetOutOfBounds(CoinGameError):
    pass


class RealityExhausted(CoinGameError):
    pass


# strategies
class HorizonExceeded(CoinGameError):
    pass


class OffSupport(CoinGameError):
    pass


# analytics
class PoleHit(CoinGameError, ValueError):
    pass


class DegenerateCounts(CoinGameError, ValueError):
    pass


class HorizonTooLarge(CoinGameError):
    pass


# ingest
class TooShort(CoinGameError, ValueError):
    pass


class BadDigit(CoinGameError, ValueError):
    pass


class ParseError(CoinGameError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MissingData(CoinGameError):
    pass
