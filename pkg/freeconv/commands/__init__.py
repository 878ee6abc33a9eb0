from .convolve import ConvCommand, InvertCommand, PhiCommand, PowerCommand
from .pairs import (PairToCharacteristicCommand, PairToMeasureCommand,
                    SelfDecompCommand)
from .sweeps import (BerryEsseenCommand, DegenerateCommand, LyapunovCommand,
                     NormingCommand)

COMMANDS = [
    ConvCommand,
    PowerCommand,
    InvertCommand,
    PhiCommand,
    PairToMeasureCommand,
    PairToCharacteristicCommand,
    BerryEsseenCommand,
    LyapunovCommand,
    DegenerateCommand,
    NormingCommand,
    SelfDecompCommand,
]
