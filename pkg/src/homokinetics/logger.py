import logging

logger = logging.getLogger("homokinetics")
