import sys
from typing import List, Optional

from loguru import logger

from src.cli.commands import run


def main(argv: Optional[List[str]] = None) -> int:
    return run(argv)


if __name__ == "__main__":
    # Check Python version
    if sys.version_info < (3, 9):
        print("Python 3.9 or higher is required")
        sys.exit(1)

    try:
        sys.exit(main())
    except Exception as e:
        logger.error(f"Fatal error: {e}")
        sys.exit(1)
