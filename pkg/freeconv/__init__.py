from .exceptions import *
from .settings import *

__version__ = '0.1.0'
