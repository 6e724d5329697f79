"""
ratcheb - JSON Handler Module

This module writes the JSON artifacts of the command line tool
(solutions, verification reports, asymptotics tables).

Every artifact is a single object with a top-level "schema" number. Keys
are sorted and floats use the shortest representation that round-trips,
so equal inputs give byte-identical files. Non-finite floats are written
as the strings "inf", "-inf" and "nan".
"""

import json
import math
from typing import Any, Dict, Optional

from .errors import ArgumentError

SCHEMA_VERSION = 1


class JsonSaveOptions:
    """
    Options for saving JSON artifacts.

    Attributes:
        indent (int): JSON indentation level. Default is 2.
        sort_keys (bool): Sort object keys. Default is True.
        ensure_ascii (bool): Escape non-ASCII characters. Default is False.
        schema (int): Value of the top-level "schema" key. Default is 1.
    """

    def __init__(self):
        self.indent = 2
        self.sort_keys = True
        self.ensure_ascii = False
        self.schema = SCHEMA_VERSION


class JsonHandler:
    """
    Handles JSON export of result payloads.

    Examples:
        >>> JsonHandler.save_json_to_string({"m": 4.0}).splitlines()[1]
        '  "m": 4.0,'
    """

    @staticmethod
    def save_json_to_string(payload: Dict[str, Any], options: Optional[JsonSaveOptions] = None) -> str:
        if options is None:
            options = JsonSaveOptions()
        data = JsonHandler.save_json_to_dict(payload, options)
        return json.dumps(
            data,
            indent=options.indent,
            sort_keys=options.sort_keys,
            ensure_ascii=options.ensure_ascii,
            allow_nan=False,
        ) + "\n"

    @staticmethod
    def save_json_to_dict(payload: Dict[str, Any], options: Optional[JsonSaveOptions] = None) -> Dict[str, Any]:
        """
        Converts a payload to a JSON-serializable dictionary carrying the schema number.

        Raises:
            ArgumentError: If the payload already has a "schema" key.
        """
        if options is None:
            options = JsonSaveOptions()
        if "schema" in payload:
            raise ArgumentError("payload must not define 'schema'")
        data = {"schema": options.schema}
        for key, value in payload.items():
            data[str(key)] = JsonHandler._format_value(value)
        return data

    @staticmethod
    def _format_value(value: Any) -> Any:
        """
        Formats a value for JSON output.
        """
        if value is None or isinstance(value, (bool, str)):
            return value
        if isinstance(value, dict):
            return {str(k): JsonHandler._format_value(v) for k, v in value.items()}
        if isinstance(value, (list, tuple)):
            return [JsonHandler._format_value(v) for v in value]
        if isinstance(value, complex):
            return [JsonHandler._format_value(value.real), JsonHandler._format_value(value.imag)]
        if hasattr(value, "tolist"):
            return JsonHandler._format_value(value.tolist())
        if isinstance(value, int):
            return int(value)
        if isinstance(value, float) or hasattr(value, "__float__"):
            x = float(value)
            if math.isnan(x):
                return "nan"
            if math.isinf(x):
                return "inf" if x > 0 else "-inf"
            return x
        return str(value)
