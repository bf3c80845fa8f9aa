"""Exception types shared across the package, mapped to CLI exit codes."""


class GapsieveError(Exception):
    """Base class; the CLI exits with `exit_code` when one escapes."""

    exit_code = 1


class ConfigError(GapsieveError):
    """Invalid input, flag, or configuration value."""

    exit_code = 2


class ParseError(ConfigError):
    """Malformed constellation text or list file."""


class CapacityError(GapsieveError):
    """A memory, data-type, or enumeration budget would be exceeded."""

    exit_code = 3
