# app/main.py
import logging
import sys
from typing import Optional, Sequence

from app.config.settings import Settings
from app.interfaces.controllers.experiment_controller import ExperimentController
from app.interfaces.routers import parse_request
from core.exceptions.domain_exceptions import DomainException

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def main(argv: Optional[Sequence[str]] = None) -> int:
    request, log_level = parse_request(argv)
    logging.basicConfig(level=log_level, format=LOG_FORMAT)
    logging.getLogger("matplotlib").setLevel(logging.WARNING)
    try:
        settings = Settings.from_env()
    except DomainException as exc:
        logging.getLogger(__name__).error("%s", exc)
        return exc.exit_code
    return ExperimentController(settings).run(request)


if __name__ == "__main__":
    sys.exit(main())
