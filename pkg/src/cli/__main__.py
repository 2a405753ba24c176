"""Allow ``python -m src.cli``."""

from .main import main

main()
