"""Python front end for the kdyn engine: configs in, JSON records out."""

import json

from . import _core

__all__ = ["KdynError", "commands", "resolve_config", "run", "degrees", "jordan", "thread_count"]

commands = list(_core.commands)
thread_count = _core.thread_count


class KdynError(RuntimeError):
    def __init__(self, code, message):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message


def _text(config):
    return config if isinstance(config, str) else json.dumps(config)


def resolve_config(config):
    """Validated config with every default filled in."""
    code, payload = _core.resolve_config(_text(config))
    if code:
        raise KdynError(code, payload)
    return json.loads(payload)


def run(config, command=None, check=True):
    """Runs one command and returns the JSON record as a dict.

    With check=True an error record raises KdynError instead.
    """
    status, payload = _core.run(_text(config), command or "")
    record = json.loads(payload)
    if check and status != 0:
        raise KdynError(record["error"]["code"], record["error"]["message"])
    return record


def degrees(model, precision_bits=128):
    """Dynamical degrees of a model section as decimal strings."""
    record = run({"model": model, "precision_bits": precision_bits}, "degrees")
    return record["result"]["profile"]["degrees"]


def jordan(matrix, precision_bits=128):
    """Jordan data of an exact matrix given as nested strings or integers."""
    return run({"jordan": {"matrix": matrix}, "precision_bits": precision_bits}, "jordan")["result"]
