from .adjacent import merge_adjacent
from .hires import merge_hires
from .imports import ImportStmt, fix_imports, parse_import
from .registry import (FIXUPS, TOOL_NAMES, TOOLS, ToolSpec, UnknownTool, get_fixup,
                       get_tool, merge_ivn, run_tool)
from .versions import VersionToken, find_version, fix_versions

__all__ = [
    "FIXUPS", "TOOL_NAMES", "TOOLS", "ImportStmt", "ToolSpec", "UnknownTool", "VersionToken",
    "find_version", "fix_imports", "fix_versions", "get_fixup", "get_tool", "merge_adjacent",
    "merge_hires", "merge_ivn", "parse_import", "run_tool",
]
