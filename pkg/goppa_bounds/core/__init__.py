# Core module - configuration, logging setup and the exception hierarchy
# shared by every service and by the command line.
