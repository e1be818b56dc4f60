"""Exception hierarchy shared across the engine."""


class ParadigmError(Exception):
    """Base class for all engine errors."""


# --- embedding provider ---

class EmptyTokenList(ParadigmError):
    pass


class EmptyToken(ParadigmError):
    pass


class TokenTooLong(ParadigmError):
    pass


class ProviderUnavailable(ParadigmError):
    """Bridge transport failure (process died, connection refused, bad reply)."""


# --- vectors / accumulation ---

class ZeroVector(ParadigmError):
    pass


class DimensionMismatch(ParadigmError):
    pass


class NonFiniteComponent(ParadigmError):
    pass


class EmptyAccumulator(ParadigmError):
    pass


class EmptyAfterExclusion(ParadigmError):
    pass


# --- store file format ---

class StoreFormatError(ParadigmError):
    pass


class BadMagic(StoreFormatError):
    pass


class UnsupportedVersion(StoreFormatError):
    pass


class TruncatedFile(StoreFormatError):
    pass


class ChecksumMismatch(StoreFormatError):
    pass


# --- lexicon ---

class FileUnreadable(ParadigmError):
    pass


class NotUtf8(ParadigmError):
    pass


class TooManyMalformedLines(ParadigmError):
    pass


class TagCountMismatch(ParadigmError):
    pass


# --- query engine ---

class EmptySentence(ParadigmError):
    pass


class TooManyTokens(ParadigmError):
    pass


class LayerModeMismatch(ParadigmError):
    pass


# --- service config ---

class ConfigError(ParadigmError):
    pass


class NoDefaultModel(ConfigError):
    pass


class MultipleDefaultModels(ConfigError):
    pass
