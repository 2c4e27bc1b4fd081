from .incmode import CHECK_PROGRAM, IncmodeConfig, run_incmode
from .main import build_parser, main, run
from .output import Printer, format_cost
from .script import ScriptError, ScriptRunner, dump_ground, parse_script
