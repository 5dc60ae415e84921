"""
ChainStore: chain files on disk.

CSV files hold one repetition each (header step, x1..xk, u1..uk, accepted,
delta_g). Archives hold every repetition of a run as MessagePack compressed
with Zstandard and restore the arrays bit-exactly.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import msgpack
import numpy as np
import pandas as pd
import zstandard as zstd

from hamslab.errors import InvalidParams
from hamslab.models import ChainRecord

logger = logging.getLogger(__name__)

ARCHIVE_VERSION = 1
ZSTD_LEVEL = 19

PathLike = Union[str, Path]


def chain_frame(record: ChainRecord) -> pd.DataFrame:
    """Tabular view of a chain with the CSV column layout."""
    columns: Dict[str, Any] = {'step': np.arange(record.n_steps)}
    for i in range(record.dim):
        columns[f'x{i + 1}'] = record.draws[:, i]
    if record.momenta is not None:
        for i in range(record.dim):
            columns[f'u{i + 1}'] = record.momenta[:, i]
    columns['accepted'] = record.accepted.astype(int)
    columns['delta_g'] = record.delta_g
    return pd.DataFrame(columns)


def write_chain_csv(path: PathLike, record: ChainRecord) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    chain_frame(record).to_csv(path, index=False, float_format='%.17g')
    return path


def read_chain_csv(path: PathLike) -> ChainRecord:
    """
    Load a chain CSV.

    Raises:
        InvalidParams: required columns are missing
    """
    frame = pd.read_csv(path)
    xs = sorted((c for c in frame.columns if c.startswith('x') and c[1:].isdigit()),
                key=lambda c: int(c[1:]))
    us = sorted((c for c in frame.columns if c.startswith('u') and c[1:].isdigit()),
                key=lambda c: int(c[1:]))
    if not xs or 'accepted' not in frame or 'delta_g' not in frame:
        raise InvalidParams(f"{path} is not a chain file")
    frame = frame.sort_values('step')
    momenta = frame[us].to_numpy(dtype=float) if us else None
    return ChainRecord(frame[xs].to_numpy(dtype=float), frame['accepted'].to_numpy() != 0,
                       frame['delta_g'].to_numpy(dtype=float), momenta)


def _pack_array(values: Optional[np.ndarray]) -> Optional[Dict[str, Any]]:
    if values is None:
        return None
    values = np.ascontiguousarray(values)
    return {'dtype': values.dtype.str, 'shape': list(values.shape), 'data': values.tobytes()}


def _unpack_array(packed: Optional[Dict[str, Any]]) -> Optional[np.ndarray]:
    if packed is None:
        return None
    array = np.frombuffer(packed['data'], dtype=np.dtype(packed['dtype']))
    return array.reshape(packed['shape']).copy()


class ChainStore:
    """Writes the chain files of one run below ``root``."""

    def __init__(self, root: PathLike):
        self.root = Path(root)

    def chain_path(self, sampler: str, rep: int, group: Optional[str] = None) -> Path:
        base = self.root / sampler
        if group:
            base = base / group
        return base / f"rep_{rep}.csv"

    def save_csv(self, sampler: str, rep: int, record: ChainRecord,
                 group: Optional[str] = None) -> Path:
        return write_chain_csv(self.chain_path(sampler, rep, group), record)

    def save_archive(self, path: PathLike, records: List[ChainRecord],
                     meta: Optional[Dict[str, Any]] = None) -> Path:
        """Pack ``records`` with MessagePack and compress with Zstandard level 19."""
        path = Path(path)
        payload = {
            'version': ARCHIVE_VERSION,
            'meta': meta or {},
            'records': [
                {
                    'draws': _pack_array(r.draws),
                    'momenta': _pack_array(r.momenta),
                    'accepted': _pack_array(r.accepted.astype(np.uint8)),
                    'delta_g': _pack_array(r.delta_g),
                    'epsilon': float(r.epsilon),
                    'elapsed': float(r.elapsed),
                }
                for r in records
            ],
        }
        packed = msgpack.packb(payload, use_bin_type=True)
        compressed = zstd.ZstdCompressor(level=ZSTD_LEVEL).compress(packed)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(compressed)
        logger.debug("archived %d chains to %s (%d -> %d bytes)", len(records), path,
                     len(packed), len(compressed))
        return path

    @staticmethod
    def load_archive(path: PathLike) -> Tuple[List[ChainRecord], Dict[str, Any]]:
        """
        Restore the records and metadata written by save_archive.

        Raises:
            InvalidParams: unknown archive version
        """
        packed = zstd.ZstdDecompressor().decompress(Path(path).read_bytes())
        payload = msgpack.unpackb(packed, raw=False, strict_map_key=False)
        if payload.get('version') != ARCHIVE_VERSION:
            raise InvalidParams(f"unsupported archive version {payload.get('version')}")
        records = [
            ChainRecord(
                _unpack_array(item['draws']),
                _unpack_array(item['accepted']).astype(bool),
                _unpack_array(item['delta_g']),
                _unpack_array(item['momenta']),
                item['epsilon'],
                item['elapsed'],
            )
            for item in payload['records']
        ]
        return records, payload['meta']
