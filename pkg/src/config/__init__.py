# src/config/__init__.py

from .defaults import *
from .constants import *
