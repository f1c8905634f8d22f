"""Command line verification suites"""

from ._BsdeCommand import BsdeCommand
from ._FejerCommand import FejerCommand
from ._HeatSolveCommand import HeatSolveCommand, default_heat_corpus
from ._ItoVerifyCommand import ItoVerifyCommand
from ._LookbackCommand import LookbackCommand
from ._methods import (
    EXIT_CONFIG,
    EXIT_FAIL,
    EXIT_PASS,
    SUITE_COMMANDS,
    main,
    make_commands,
    make_parser,
    resolve_config,
    run,
    run_commands,
    suite_error,
)
from ._RegintCommand import RegintCommand
from ._RunConfig import SUITES, RunConfig
from ._SuiteCommand import FIXTURE_KINDS, SuiteCommand
from ._SvConvergeCommand import SvConvergeCommand
