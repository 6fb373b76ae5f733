# file_operations.py
# ============================================================================
# File Import/Export Operations - distributions, circuits, reports
# ============================================================================

import io
import json
import math
import os
import sys
from pathlib import Path

import pandas as pd

from circuit_dsl import CircuitError, compile_circuit, parse_circuit
from config import (
    CIRCUIT_EXTENSION,
    JSON_INDENT,
    NORMALIZATION_TOLERANCE,
    RENORMALIZE_WINDOW,
    TSV_EXTENSION,
    TSV_PROBABILITY_COLUMN,
    TSV_TARGET_COLUMN,
    VERBOSE,
)
from joint_table import DistributionError, JointTable
from pdf_generator import generate_default_filename, reports_to_pdf

TARGET_AXIS_NAME = "Y"


def log_status(message, verbose=True):
    """Status lines go to stderr so stdout stays machine-readable"""
    if verbose:
        print(message, file=sys.stderr)


class FileOperationsManager:
    """Distribution and report import/export manager"""

    def __init__(self, verbose=VERBOSE):
        self.verbose = verbose

    # ------------------------------------------------------------------
    # Import
    # ------------------------------------------------------------------

    def load_input(self, path, renormalize=False):
        """Load a .tsv distribution or a .circ circuit; returns (success, table, message)"""
        suffix = Path(path).suffix.lower()
        if suffix == TSV_EXTENSION:
            return self.load_distribution(path, renormalize=renormalize)
        if suffix == CIRCUIT_EXTENSION:
            return self.load_circuit(path)
        error_msg = f"Unsupported input '{path}': expected {TSV_EXTENSION} or {CIRCUIT_EXTENSION}"
        log_status(f"❌ {error_msg}", self.verbose)
        return False, None, error_msg

    def parse_distribution_text(self, text, renormalize=False):
        """Parse TSV text: predictor columns, then target, then p"""
        # Header read as a plain row so pandas cannot rename repeated names
        frame = pd.read_csv(io.StringIO(text), sep="\t", comment="#", dtype=str, header=None,
                            keep_default_na=False, skip_blank_lines=True)
        columns = [str(column).strip() for column in frame.iloc[0]]
        repeated = sorted({column for column in columns if columns.count(column) > 1})
        if repeated:
            raise DistributionError(f"duplicate column names {repeated}")
        if len(columns) < 3 or columns[-2:] != [TSV_TARGET_COLUMN, TSV_PROBABILITY_COLUMN]:
            raise DistributionError(
                f"header must list predictor columns, then '{TSV_TARGET_COLUMN}', then "
                f"'{TSV_PROBABILITY_COLUMN}' (got {columns})")
        predictors = columns[:-2]

        rows = []
        for number, record in enumerate(frame.iloc[1:].itertuples(index=False), start=1):
            values = [str(value).strip() for value in record]
            try:
                probability = float(values[-1])
            except ValueError:
                raise DistributionError(f"row {number}: bad probability '{values[-1]}'") from None
            if not math.isfinite(probability) or probability < 0:
                raise DistributionError(f"row {number}: probability must be finite and >= 0")
            if probability > 0:
                rows.append((tuple(values[:-1]), probability))
        if not rows:
            raise DistributionError("no rows with positive mass")

        total = math.fsum(p for _, p in rows)
        if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
            if not (renormalize and abs(total - 1.0) < RENORMALIZE_WINDOW):
                raise DistributionError(f"mass sums to {total:.12g}")
            log_status(f"🔄 Renormalizing mass that sums to {total:.12g}", self.verbose)
            rows = [(labels, p / total) for labels, p in rows]

        return JointTable.from_rows(predictors, TARGET_AXIS_NAME, rows)

    def load_distribution(self, path, renormalize=False):
        try:
            log_status(f"📄 Loading distribution: {path}", self.verbose)
            text = Path(path).read_text(encoding="utf-8")
            table = self.parse_distribution_text(text, renormalize=renormalize)
            success_msg = f"Distribution loaded: {table.n_predictors} predictor(s), shape {table.shape}"
            log_status(f"✅ {success_msg}", self.verbose)
            return True, table, success_msg
        except (OSError, ValueError, pd.errors.ParserError) as e:
            error_msg = f"{path}: {e}"
            log_status(f"❌ {error_msg}", self.verbose)
            return False, None, error_msg

    def load_circuit(self, path):
        """Parse and compile a circuit file"""
        try:
            log_status(f"📄 Compiling circuit: {path}", self.verbose)
            text = Path(path).read_text(encoding="utf-8")
            table = compile_circuit(parse_circuit(text))
            success_msg = f"Circuit compiled: {table.n_predictors} predictor(s), shape {table.shape}"
            log_status(f"✅ {success_msg}", self.verbose)
            return True, table, success_msg
        except CircuitError as e:
            error_msg = f"{path}:{e}"
            log_status(f"❌ {error_msg}", self.verbose)
            return False, None, error_msg
        except UnicodeDecodeError as e:
            error_msg = f"{path}: not valid UTF-8 (byte {e.start})"
            log_status(f"❌ {error_msg}", self.verbose)
            return False, None, error_msg
        except (OSError, DistributionError) as e:
            error_msg = f"{path}: {e}"
            log_status(f"❌ {error_msg}", self.verbose)
            return False, None, error_msg

    # ------------------------------------------------------------------
    # Export
    # ------------------------------------------------------------------

    def format_distribution(self, table: JointTable):
        """TSV text in the input format, full float precision"""
        table.require_target()
        header = list(table.predictor_names) + [TSV_TARGET_COLUMN, TSV_PROBABILITY_COLUMN]
        records = [list(labels) + [repr(p)] for labels, p in table.rows()]
        frame = pd.DataFrame(records, columns=header)
        return frame.to_csv(sep="\t", index=False, lineterminator="\n")

    def format_json(self, payload):
        return json.dumps(payload, indent=JSON_INDENT, ensure_ascii=False) + "\n"

    def export_to_pdf(self, reports, output_path=None, title="Synergy Report"):
        """Render measure reports into a PDF file"""
        try:
            output_path = output_path or os.path.join(os.getcwd(), generate_default_filename())
            log_status(f"📄 Starting PDF export to: {output_path}", self.verbose)
            result = reports_to_pdf(reports, output_path, title=title, verbose=self.verbose)
            if result['success']:
                log_status(f"✅ {result['message']}", self.verbose)
            else:
                log_status(f"❌ {result['message']}", self.verbose)
            return result
        except Exception as e:
            error_msg = f"Export failed: {str(e)}"
            log_status(f"❌ {error_msg}", self.verbose)
            return {
                'success': False,
                'file_path': output_path,
                'cancelled': False,
                'message': error_msg
            }
