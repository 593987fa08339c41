# Core package
# This package contains the domain types, enumerations and error taxonomy shared by every numerical module
