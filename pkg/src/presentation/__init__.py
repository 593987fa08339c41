# Presentation package
# This package contains the command-line surface: argument parsing, command handlers and exit codes
