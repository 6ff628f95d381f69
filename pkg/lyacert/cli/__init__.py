from .application import Application
from lyacert.utils import setup_logging


def main():
    setup_logging()
    return Application(prog="lyacert").run()
