# coding: utf-8
"""
File formats: matrix/state/witness JSON, scan CSV, the fixed-width matrix
grid printed by the CLI, and WitnessArchive, an HDF5 file of named matrices.
"""
import csv
import datetime
import json
import os

import h5py
import numpy

from mubwit_globals import (
    LOGGER,
    FILE_VERSION,
    GENERATOR_VERSION,
    CSV_HEADER,
    GROUP_WITNESSES,
    GROUP_STATES,
    GROUP_DECOMPOSITIONS,
    GROUP_BASES,
)
from mubwit_helper_classes import DensityState, ShapeError, DomainError
from mubwit_linalg import matrix_to_dict, matrix_from_dict, local_dim


# JSON ------------------------------------------------------------------------------------------------------------------
def write_json(path, data):
    with open(path, "w", encoding="utf-8") as outfile:
        json.dump(data, outfile, indent=1)
        outfile.write("\n")
    LOGGER.debug("Wrote %s", path)


def read_json(path):
    with open(path, encoding="utf-8") as infile:
        return json.load(infile)


def save_matrix(path, m, **extra):
    """Writes matrix JSON; 'extra' keys (e.g. the witness spec) are stored alongside."""
    data = matrix_to_dict(m)
    data.update(extra)
    write_json(path, data)


def load_matrix(path):
    return matrix_from_dict(read_json(path), os.path.basename(path))


def state_from_dict(data):
    matrix = matrix_from_dict(data, "state")
    try:
        family = data["family"]
        params = data.get("params", {})
    except (KeyError, AttributeError) as exc:
        raise ShapeError("state JSON needs 'family' and 'params'") from exc
    return DensityState(local_dim(matrix), matrix, family, params)


def load_state(path):
    return state_from_dict(read_json(path))


# CSV -------------------------------------------------------------------------------------------------------------------
def write_scan_csv(outfile, reports):
    """Writes DetectionReports as CSV to an open text file."""
    writer = csv.writer(outfile, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for report in reports:
        writer.writerow(report.csv_row())


def save_scan_csv(path, reports):
    with open(path, "w", encoding="utf-8", newline="") as outfile:
        write_scan_csv(outfile, reports)
    LOGGER.info("Wrote %d scan rows to %s", len(reports), path)


# Grid printing ---------------------------------------------------------------------------------------------------------
def _format_entry(value, digits):
    if value == 0:
        return "."
    re = 0.0 if abs(value.real) < 10 ** -(digits + 2) else value.real
    im = 0.0 if abs(value.imag) < 10 ** -(digits + 2) else value.imag
    if im == 0.0:
        return "%.*g" % (digits, re)
    if re == 0.0:
        return "%.*gi" % (digits, im)
    return "%.*g%+.*gi" % (digits, re, digits, im)


def format_grid(m, digits=4):
    """Formats a matrix as aligned columns, '.' marking exact zeros."""
    m = numpy.asarray(m, dtype=complex)
    cells = [[_format_entry(v, digits) for v in row] for row in m]
    width = max(len(cell) for row in cells for cell in row)
    return "\n".join(" ".join(cell.rjust(width) for cell in row) for row in cells)


# HDF5 archive ----------------------------------------------------------------------------------------------------------
class WitnessArchive:
    """HDF5 file holding named complex matrices in the Witnesses, States,
    Decompositions and Bases groups, each with its parameters as attributes."""

    GROUPS = (GROUP_WITNESSES, GROUP_STATES, GROUP_DECOMPOSITIONS, GROUP_BASES)

    def __init__(self, filename, mode="r"):
        if mode == "r":
            reading = True
            # read-only access needs no lock
            os.environ["HDF5_USE_FILE_LOCKING"] = "FALSE"
        elif mode == "r+":
            reading = True
        elif mode == "w":
            reading = False
        else:
            raise ValueError(
                "Invalid file mode. Expected 'r' or 'r+' or 'w', got '{}'".format(mode)
            )

        self.filename = filename
        self.file = h5py.File(filename, mode)
        self.mode = mode

        if reading:
            version = self.file.attrs.get("version")
            if version != FILE_VERSION:
                self.file.close()
                raise DomainError(
                    "File version is {}, but this is version {}".format(
                        version, FILE_VERSION
                    )
                )
        else:
            self.__write_metadata()

    def __write_metadata(self):
        self.file.attrs["generator"] = f"mubwit.py v{GENERATOR_VERSION}"
        self.file.attrs["version"] = FILE_VERSION
        self.file.attrs["created"] = str(datetime.datetime.now())
        for group in WitnessArchive.GROUPS:
            self.file.require_group(group)

    def get_metadata(self):
        return {
            "generator": self.file.attrs["generator"],
            "version": self.file.attrs["version"],
            "created": self.file.attrs["created"],
        }

    def add_matrix(self, group, name, matrix, **attrs):
        """Stores 'matrix' as group/name; attrs must be scalars or strings."""
        if self.mode == "r":
            raise ValueError("archive {} is open read-only".format(self.filename))
        if group not in WitnessArchive.GROUPS:
            raise DomainError("unknown archive group '{}'".format(group))
        path = "{}/{}".format(group, name)
        if path in self.file:
            del self.file[path]
        dset = self.file.create_dataset(
            path, data=numpy.asarray(matrix, dtype=complex), compression="gzip"
        )
        for key, value in attrs.items():
            dset.attrs[key] = value
        return dset

    def get_matrix(self, group, name):
        path = "{}/{}".format(group, name)
        if path not in self.file:
            raise DomainError("no matrix '{}' in {}".format(path, self.filename))
        return self.file[path][()]

    def get_attrs(self, group, name):
        return dict(self.file["{}/{}".format(group, name)].attrs)

    def names(self, group):
        if group not in self.file:
            return []
        return sorted(self.file[group].keys())

    def close(self):
        self.file.close()

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        self.close()
        return False
