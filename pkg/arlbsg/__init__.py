name = "arlbsg"
__version__ = "0.1.0"
