import logging


def set_logging(level: int = logging.INFO) -> None:
    """
    Must be called after argparse.
    """
    logging.basicConfig(level=level,
                        format='%(asctime)s - %(levelname)s - %(message)s')
