# Infrastructure lib module
