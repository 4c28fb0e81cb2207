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

class Error(Exception):
    """
    Base class for Exceptions
    """

    def __init__(self, msg):
        Exception.__init__(self, msg)


class ValidationError(Error):
    """
    Exception if validation errors occur
    """

    def __init__(self, errors, msg="Validation Error"):
        Error.__init__(self, msg)
        self.errors = errors


class LoadError(ValidationError):
    """
    Exception if a project document violates the schema. `errors` maps
    block ids (or document paths for blocks without id) to error codes
    """

    def __init__(self, errors):
        first = sorted(errors)[0] if errors else "?"
        msg = "Loading project failed at block '{}': {}".format(
            first, errors.get(first))
        ValidationError.__init__(self, errors, msg)


class ConfigError(ValidationError):
    """
    Exception for invalid configuration values
    """

    def __init__(self, errors):
        msg = "Invalid configuration: {}".format(
            ", ".join("{}={}".format(k, errors[k]) for k in sorted(errors)))
        ValidationError.__init__(self, errors, msg)


class VmError(Error):
    """
    Exception for misuse of the virtual machine
    """

    pass


class ReplayError(Error):
    """
    Exception if a test suite does not fit the project it is replayed on
    """

    def __init__(self, msg, names):
        Error.__init__(self, msg)
        self.names = names


class EnumerationError(Error):
    """
    Exception if exhaustive enumeration would exceed its bound
    """

    def __init__(self, msg, estimate):
        Error.__init__(self, msg)
        self.estimate = estimate
