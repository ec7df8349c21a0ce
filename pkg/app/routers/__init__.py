from . import classification, enumeration, extensions, health, rings
