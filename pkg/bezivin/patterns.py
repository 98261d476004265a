import re

RATIONAL_PATTERN = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")

TOKEN_PATTERN = re.compile(
    r"(?P<NUMBER>\d+)"
    r"|(?P<VAR>x\d+)"
    r"|(?P<OP>[-+*/^()])"
    r"|(?P<NEWLINE>\n)"
    r"|(?P<SKIP>[ \t\r]+)"
    r"|(?P<MISMATCH>.)"
)

VECTOR_SEPARATOR_PATTERN = re.compile(r"\s*,\s*")
SET_PART_SEPARATOR_PATTERN = re.compile(r"\s*;\s*")
