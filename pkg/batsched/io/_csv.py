import pandas as pd

from batsched.battery.model import PROFILE_COLUMNS, DischargeProfile
from batsched.exceptions import GraphFileError, InvalidArgumentError


def _read_profile_csv(filename_or_buf) -> DischargeProfile:
    """Reads a discharge profile written by ``_write_profile_csv``."""
    try:
        df = pd.read_csv(filename_or_buf, float_precision="round_trip")
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise GraphFileError(f"Could not parse profile: {e}") from e

    missing = [c for c in PROFILE_COLUMNS if c not in df.columns]
    if missing:
        raise GraphFileError(f"Profile is missing columns {missing}")

    for column in PROFILE_COLUMNS:
        if not pd.api.types.is_numeric_dtype(df[column]):
            raise GraphFileError(f"Profile column {column} holds non-numeric values")

    try:
        return DischargeProfile.from_dataframe(df)
    except InvalidArgumentError as e:
        raise GraphFileError(f"Invalid profile: {e}") from e


def _write_profile_csv(profile: DischargeProfile, filename_or_buf=None):
    """Writes ``profile`` as UTF-8 CSV with a header row and LF line
    endings; returns the text when ``filename_or_buf`` is None."""
    return profile.to_dataframe().to_csv(
        filename_or_buf, index=False, lineterminator="\n", encoding="utf-8"
    )
