"""
Report serialization: line-oriented key/value text and JSON
"""
import json
from enum import Enum
from typing import Any, Optional

import numpy as np

from ..models.schemas import OutputFormat, Report
from .numeric import format_float


def _text_value(value: Any, digits: Optional[int]) -> str:
    if value is None:
        return "-"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, (float, np.floating)):
        return format_float(value, digits)
    if isinstance(value, tuple):
        return ":".join(_text_value(v, digits) for v in value)
    if isinstance(value, (list, np.ndarray)):
        return " ".join(_text_value(v, digits) for v in value) if len(value) else "-"
    return str(value)


def _json_value(value: Any, digits: Optional[int]) -> Any:
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (float, np.floating)):
        return float(format_float(value, digits))
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_json_value(v, digits) for v in value]
    return value


class ReportWriter:
    """Writes Report objects; floats always carry a fixed number of significant digits"""

    def __init__(self, digits: Optional[int] = None):
        self.digits = digits

    def write(self, report: Report, output_format: OutputFormat = OutputFormat.TEXT) -> str:
        if output_format == OutputFormat.JSON:
            return self.to_json(report)
        return self.to_text(report)

    def to_text(self, report: Report) -> str:
        """Blank-line separated blocks, each opened by a 'section <name>' record"""
        blocks = []
        for section in report.sections:
            lines = [f"section {section.name}"]
            for key, value in section.records:
                if isinstance(value, str) and "\n" in value:
                    # multi-line blocks (maps) are indented under their key
                    lines.append(key)
                    lines.extend(f"  {row}" for row in value.rstrip("\n").split("\n"))
                else:
                    lines.append(f"{key} {_text_value(value, self.digits)}")
            blocks.append("\n".join(lines))
        return f"verb {report.verb.value}\n\n" + "\n\n".join(blocks) + "\n"

    def to_json(self, report: Report) -> str:
        document = {
            "verb": report.verb.value,
            "sections": [
                {
                    "name": section.name,
                    "records": {key: _json_value(value, self.digits) for key, value in section.records},
                }
                for section in report.sections
            ],
        }
        return json.dumps(document, indent=2) + "\n"
