from typing import Any


class ZenoError(Exception):
    """Base class for errors raised by `zenochain`. Adds a `params` dictionary
    that is used to format the `description`, and an `exit_code` that the
    command line front end uses as the process exit status."""

    name: str = 'Error'
    """Short title of the problem."""
    description: str = 'An error occurred'
    """Details of the problem. The value is treated as a format string, and is
    filled in using the `params` dictionary."""
    exit_code: int = 2
    """Process exit status used by the command line front end."""

    def __init__(self, description: str = None, **params):
        if description is not None:
            self.description = description
        self.params = params
        super().__init__(self.details)

    @property
    def details(self) -> str:
        return self.description.format(**self.params)

    def as_report(self) -> dict[str, Any]:
        """Format the exception information as a dictionary.

        | Key           | Attribute                                            |
        |---------------|------------------------------------------------------|
        | `"exit_code"` | `exit_code`                                          |
        | `"title"`     | `name`                                               |
        | `"details"`   | `description`, formatted using the `params` dictionary |

        ```pycon
        >>> InvalidParams('g must be positive, got {g}', g=-1).as_report()
        {'exit_code': 2, 'title': 'Invalid parameters', 'details': 'g must be positive, got -1'}

        ```
        """
        return {
            'exit_code': self.exit_code,
            'title': self.name,
            'details': self.details,
        }


class InvalidMatrix(ZenoError, ValueError):
    name = 'Invalid matrix'
    description = 'Matrix is not {expected}'


class DimensionError(ZenoError, ValueError):
    name = 'Dimension mismatch'
    description = 'Expected dimension {expected}, got {actual}'


class InvalidParams(ZenoError, ValueError):
    name = 'Invalid parameters'
    description = 'Invalid parameters'


class ConfigError(ZenoError):
    """The run configuration is incomplete or inconsistent.

    The exit code is `1`."""

    name = 'Configuration error'
    description = 'Invalid configuration'
    exit_code = 1


class OutputError(ZenoError):
    """An output file could not be written."""

    name = 'Output error'
    description = 'Unable to write {path}: {reason}'


class OracleFailure(ZenoError):
    """At least one analytic oracle check failed.

    The exit code is `3`."""

    name = 'Oracle failure'
    description = '{failed} of {total} checks failed'
    exit_code = 3
