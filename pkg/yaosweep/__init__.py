from __future__ import annotations

import shutil

from rich.console import Console

# Get terminal width, default to 175 if not available
terminal_width = shutil.get_terminal_size(fallback=(175, 24)).columns

# Logs and progress go to stderr, stdout is reserved for command results
console = Console(width=terminal_width, stderr=True)

__version__ = "0.1.0"
