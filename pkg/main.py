import sys
import traceback

from dla.cli import run
from dla.logger import setup_logger


def main(argv=None):
    # Setup logging system; the CLI reconfigures it from the settings file
    logger = setup_logger()
    logger.info("Starting dla")

    try:
        return run(argv)
    except SystemExit:
        raise
    except Exception as e:
        logger.critical(f"dla crashed: {e}")
        logger.critical(traceback.format_exc())
        raise


if __name__ == "__main__":
    sys.exit(main())
