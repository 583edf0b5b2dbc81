"""Error type shared by every module.

Each failure carries a machine-readable ``code`` (e.g. ``UNKNOWN_VARIABLE``,
``NOT_ZERO_DIMENSIONAL``) plus free-form details that the CLI serializes.
"""


class ZSchemeError(Exception):
    def __init__(self, code, message="", **details):
        self.code = code
        self.message = message or code
        self.details = details
        super().__init__(f"{code}: {self.message}")

    def to_dict(self):
        out = {"code": self.code, "message": self.message}
        if self.details:
            out["details"] = {k: _jsonable(v) for k, v in sorted(self.details.items())}
        return out


def _jsonable(value):
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return str(value)
