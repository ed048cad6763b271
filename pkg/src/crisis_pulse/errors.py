"""Exception types shared across pipeline stages."""

import json


class ValidationError(ValueError):
    """Input failed validation; maps to CLI exit code 1."""

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details

    def to_json(self):
        return json.dumps({"error": "validation", "message": str(self), **self.details},
                          ensure_ascii=False, sort_keys=True)


class MissingPrerequisite(FileNotFoundError):
    """A stage input produced by an earlier stage is absent; maps to exit code 2."""

    def __init__(self, path):
        super().__init__(f"missing prerequisite: {path}")
        self.path = str(path)
