"""
Finite samples of value sets in the complex plane, and their file formats.

CSV rows are ``sigma,t,re,im`` with shortest round-trip float formatting; torus
samples have no t and leave that column empty. SVG output is a scatter plot
drawn with matplotlib; large clouds are thinned by a fixed stride for the plot
only.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from matplotlib.figure import Figure

from .config import Config
from .debug import debug_print, warn_print
from .exponents import BohrError

config = Config()

CSV_HEADER = ('sigma', 't', 're', 'im')


class EmptyCloudError(BohrError, ValueError):
    """raised when a distance is asked of a cloud without points"""


def _fmt(x: float) -> str:
    return repr(float(x))


@dataclass(frozen=True, eq=False)
class ImageCloud:
    """
    Sampled values with the sigma of each point and a description of the
    sampler that produced them.
    """

    points: np.ndarray
    sigmas: np.ndarray
    meta: dict = field(default_factory=dict)
    ts: Optional[np.ndarray] = None

    def __post_init__(self):
        points = np.asarray(self.points, dtype=complex).reshape(-1)
        sigmas = np.asarray(self.sigmas, dtype=float).reshape(-1)
        if sigmas.size == 1 and points.size != 1:
            sigmas = np.full(points.size, sigmas[0])
        if sigmas.size != points.size:
            raise ValueError(f'{sigmas.size} sigma values for {points.size} points')
        object.__setattr__(self, 'points', points)
        object.__setattr__(self, 'sigmas', sigmas)
        if self.ts is not None:
            ts = np.asarray(self.ts, dtype=float).reshape(-1)
            if ts.size != points.size:
                raise ValueError(f'{ts.size} t values for {points.size} points')
            object.__setattr__(self, 'ts', ts)

    def __len__(self):
        return self.points.size

    @property
    def xy(self) -> np.ndarray:
        """the points as an (N, 2) real array"""
        return np.column_stack((self.points.real, self.points.imag))

    def max_modulus(self) -> float:
        if not len(self):
            raise EmptyCloudError('cloud has no points')
        return float(np.abs(self.points).max())

    def sigma_values(self) -> np.ndarray:
        return np.unique(self.sigmas)

    @classmethod
    def concat(cls, clouds: Sequence['ImageCloud'], meta: Optional[dict] = None) -> 'ImageCloud':
        clouds = list(clouds)
        ts = None
        if clouds and all(c.ts is not None for c in clouds):
            ts = np.concatenate([c.ts for c in clouds])
        return cls(np.concatenate([c.points for c in clouds]) if clouds else np.zeros(0, complex),
                   np.concatenate([c.sigmas for c in clouds]) if clouds else np.zeros(0),
                   dict(meta or {}), ts)

    def to_csv(self, stream):
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(CSV_HEADER)
        ts = self.ts if self.ts is not None else [None] * len(self)
        for w, sigma, t in zip(self.points, self.sigmas, ts):
            writer.writerow((_fmt(sigma), '' if t is None else _fmt(t), _fmt(w.real), _fmt(w.imag)))

    def to_dict(self) -> dict:
        return {
            'meta': self.meta,
            'sigma': [float(x) for x in self.sigmas],
            't': None if self.ts is None else [float(x) for x in self.ts],
            're': [float(x) for x in self.points.real],
            'im': [float(x) for x in self.points.imag],
        }

    def to_svg(self, stream, max_points: Optional[int] = None, radius: float = 0.5):
        """
        Scatter plot of the cloud on a square canvas with equal axes.

        :param stream: a text stream receiving the SVG document
        :param max_points: thinning threshold, config.svg_max_points if None
        :param radius: marker radius in points
        """
        max_points = max_points or config.svg_max_points
        pts = self.points
        if pts.size > max_points:
            stride = math.ceil(pts.size / max_points)
            pts = pts[::stride]
            warn_print(f'svg: {self.points.size} points thinned to {pts.size} (stride {stride})')
        fig = Figure(figsize=(6, 6))
        ax = fig.subplots()
        ax.scatter(pts.real, pts.imag, s=(2 * radius) ** 2, marker='o', linewidths=0, color='k')
        ax.set_aspect('equal')
        ax.set_xlabel('Re')
        ax.set_ylabel('Im')
        fig.savefig(stream, format='svg')
        debug_print(f'svg: {pts.size} markers')

    def write(self, path: str, fmt: Optional[str] = None):
        """write the cloud to path; fmt defaults to the suffix, else csv"""
        fmt = fmt or infer_format(path)
        with open(path, 'w', newline='', encoding='utf-8') as f:
            if fmt == 'csv':
                self.to_csv(f)
            elif fmt == 'json':
                json.dump(self.to_dict(), f)
            elif fmt == 'svg':
                self.to_svg(f)
            else:
                raise ValueError(f'unknown cloud format {fmt!r}')


def infer_format(path: Optional[str]) -> str:
    if path:
        suffix = path.rsplit('.', 1)[-1].lower()
        if suffix in ('csv', 'json', 'svg'):
            return suffix
    return 'csv'


def read_csv(stream, meta: Optional[dict] = None) -> ImageCloud:
    rows = list(csv.reader(stream))
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise ValueError(f'expected header {",".join(CSV_HEADER)}')
    body = rows[1:]
    sigmas = [float(r[0]) for r in body]
    ts = [float(r[1]) for r in body] if body and all(r[1] for r in body) else None
    points = [complex(float(r[2]), float(r[3])) for r in body]
    return ImageCloud(np.array(points, dtype=complex), np.array(sigmas), dict(meta or {}), ts)


def csv_text(cloud: ImageCloud) -> str:
    out = io.StringIO()
    cloud.to_csv(out)
    return out.getvalue()
