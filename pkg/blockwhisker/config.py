# blockwhisker - search-based test generation for block programs
# Copyright (C) 2017 Lukas Schwarz
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.

from fractions import Fraction
from .error import *
from .validate import validate


class Config:
    """
    Base class for configurations. Defaults are class attributes, which can
    be overridden by keyword arguments of the constructor
    """

    # Validation format for each configurable attribute (MUST BE SET IN
    # DERIVED CLASS)
    #
    # Attribute name as key, list of formats which `validate()` understands
    # as value
    formats = {}


    def __init__(self, **kwargs):
        """
        Setup configuration

        Parameters
        ----------
        **kwargs : mixed
            Values overriding the defaults

        Raises
        ------
        ConfigError
            If an unknown attribute is given or a value is invalid
        """
        errors = {}
        for key in sorted(kwargs):
            value = kwargs[key]
            if key not in self.formats:
                errors[key] = "UNKNOWN_FIELD"
                continue
            validate(key, value, self.formats[key], errors)
            if key not in errors:
                setattr(self, key, value)
        self.check(errors)
        if errors:
            raise ConfigError(errors)


    def check(self, errors):
        """
        Check constraints between attributes, store violations in `errors`
        """
        pass


    def to_dict(self):
        """
        Return all configurable attributes

        Returns
        -------
        dict
            Attribute name as key, its value as value
        """
        return dict((k, getattr(self, k)) for k in sorted(self.formats))


class VmConfig(Config):
    """
    Configuration of the virtual machine
    """

    formats = {
        "seed": ["int"],
        "step_time_ms": ["pint"],
        "acceleration": ["pint"],
        "clone_limit": ["uint"],
        "timer_increment": ["ufloat"],
        "sound_duration": ["pint"],
    }

    # Seed of the random number generator of each test execution
    seed = 0

    # Duration of a single step in milliseconds at acceleration 1
    step_time_ms = 30

    # Acceleration factor. Divides both the step time and all durations, so
    # step counts are (for divisors of `step_time_ms`) independent of it
    acceleration = 1

    # Maximum number of clones alive at the same time
    clone_limit = 50

    # Increment of the timer per step, independent of the acceleration
    timer_increment = 0.075

    # Number of steps a simulated sound lasts
    sound_duration = 10


    def step_time(self):
        """
        Step time in milliseconds with the acceleration applied (floor,
        minimum 1)

        Returns
        -------
        int
            Step time
        """
        return max(1, self.step_time_ms // self.acceleration)


    def steps_for(self, seconds):
        """
        Number of steps a duration of `seconds` takes under acceleration

        Parameters
        ----------
        seconds : int, float
            Duration in unaccelerated seconds

        Returns
        -------
        int
            Number of steps
        """
        from .VmState import seconds_to_steps
        if seconds <= 0:
            return 0
        return seconds_to_steps(
            Fraction(str(seconds)) / self.acceleration, self.step_time())


class SearchConfig(Config):
    """
    Configuration of the test generation algorithms
    """

    formats = {
        "seed": ["int"],
        "min_groups": ["pint"],
        "max_groups": ["pint"],
        "codon_max": ["pint"],
        "gaussian_sigma": ["ufloat"],
        "key_press_bound": ["pint"],
        "wait_bound": ["pint"],
        "population_size": ["pint"],
        "crossover_prob": ["prob"],
        "local_search_prob": ["prob"],
        "new_event_prob": ["prob"],
        "max_codon_length": ["pint"],
        "mio_focus": ["prob"],
        "mio_n0": ["pint"],
        "mio_nf": ["pint"],
        "mio_r0": ["prob"],
        "mio_rf": ["prob"],
        "mio_m0": ["pint"],
        "mio_mf": ["pint"],
        "budget_executions": ["pint"],
        "budget_steps": ["pint"],
        "budget_seconds": ["ufloat"],
        "extraction": ["r_dynamic|static"],
        "vm": [],
    }

    # Seed of the search (genotype sampling, operators)
    seed = 0

    # Bounds of the number of codon groups of random genotypes
    min_groups = 2
    max_groups = 20

    # Exclusive upper bound of codon values
    codon_max = 65536

    # Standard deviation of the gaussian codon perturbation
    gaussian_sigma = 10

    # Upper bounds (exclusive) of key press and wait durations in steps
    key_press_bound = 50
    wait_bound = 50

    # MOSA
    population_size = 30
    crossover_prob = 0.7

    # Local search
    local_search_prob = 0.3
    new_event_prob = 0.5
    max_codon_length = 20

    # MIO: start of the focused phase, archive size n, random sampling
    # probability r and number of mutations m, each interpolated from start
    # (0) to focus (f) value
    mio_focus = 1.0
    mio_n0 = 10
    mio_nf = 1
    mio_r0 = 0.9
    mio_rf = 0.0
    mio_m0 = 1
    mio_mf = 10

    # Budget, at least one must be set for running an algorithm
    budget_executions = None
    budget_steps = None
    budget_seconds = None

    # Event extraction used when decoding genotypes: "dynamic" or "static"
    extraction = "dynamic"

    # Configuration of the virtual machine, default VmConfig() if None
    vm = None


    def check(self, errors):
        if self.min_groups > self.max_groups:
            errors["min_groups"] = "INVALID_RANGE"
        if self.population_size < 2:
            errors["population_size"] = "INVALID_POPULATION"
        if self.vm is None:
            self.vm = VmConfig()
        elif not isinstance(self.vm, VmConfig):
            errors["vm"] = "INVALID_VM_CONFIG"


    def has_budget(self):
        return (self.budget_executions is not None
            or self.budget_steps is not None
            or self.budget_seconds is not None)


    def to_dict(self):
        d = Config.to_dict(self)
        d["vm"] = self.vm.to_dict()
        return d
