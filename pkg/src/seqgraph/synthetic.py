"""Synthetic dataset generators shaped like well-known UCR benchmarks.

CBF and SyntheticControl follow their published generating processes, so
fresh draws are statistically faithful to the archive versions. The other
generators are structural stand-ins: same series count, length and class
count as the archive dataset they are named after, with class differences
mimicking the documented discriminative structure. They exist so the
benchmark harness and acceptance suite can run on machines without a copy
of the archive; ``load_benchmark`` prefers real archive files when a root
directory is available.

All generated series are z-normalized, matching archive conventions.
"""
from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .dataset import Dataset, TimeSeries, load_ucr_tsv

UCR_ROOT_ENV = "SEQGRAPH_UCR_ROOT"


def _z(values: np.ndarray) -> np.ndarray:
    sd = values.std()
    return (values - values.mean()) / (sd if sd > 0 else 1.0)


def _assemble(rows: list[np.ndarray], labels: list[int], name: str) -> Dataset:
    series = [TimeSeries(_z(v), id=i) for i, v in enumerate(rows)]
    return Dataset(tuple(series), np.array(labels), name)


def _smooth_noise(rng: np.random.Generator, length: int, sigma: float, window: int = 5) -> np.ndarray:
    raw = rng.normal(0.0, sigma, length + window - 1)
    kernel = np.ones(window) / window
    return np.convolve(raw, kernel, mode="valid")


def cylinder_bell_funnel(n_per_class: int = 310, length: int = 128, seed: int = 0) -> Dataset:
    """Classic cylinder/bell/funnel process (labels 1, 2, 3)."""
    rng = np.random.default_rng(seed)
    rows, labels = [], []
    t = np.arange(length)
    for label in (1, 2, 3):
        for _ in range(n_per_class):
            a = rng.integers(length // 8, length // 4)
            b = a + rng.integers(length // 4, int(length * 0.75))
            b = min(b, length - 1)
            amplitude = 6.0 + rng.normal()
            window = ((t >= a) & (t <= b)).astype(float)
            if label == 1:
                shape = window
            elif label == 2:
                shape = window * (t - a) / (b - a)
            else:
                shape = window * (b - t) / (b - a)
            rows.append(amplitude * shape + rng.normal(0.0, 1.0, length))
            labels.append(label)
    return _assemble(rows, labels, "CBF")


def control_charts(n_per_class: int = 100, length: int = 60, seed: int = 0) -> Dataset:
    """Six control-chart families (labels 1..6)."""
    rng = np.random.default_rng(seed)
    rows, labels = [], []
    t = np.arange(length, dtype=float)
    for label in range(1, 7):
        for _ in range(n_per_class):
            base = 30.0 + rng.uniform(-3, 3, length) * 2.0
            if label == 2:
                base += rng.uniform(10, 15) * np.sin(2 * np.pi * t / rng.uniform(10, 15))
            elif label == 3:
                base += rng.uniform(0.2, 0.5) * t
            elif label == 4:
                base -= rng.uniform(0.2, 0.5) * t
            elif label in (5, 6):
                onset = rng.integers(length // 3, 2 * length // 3)
                shift = rng.uniform(7.5, 20) * (t >= onset)
                base += shift if label == 5 else -shift
            rows.append(base)
            labels.append(label)
    return _assemble(rows, labels, "SyntheticControl")


def transient_families(n_per_class: int = 50, length: int = 275, seed: int = 0) -> Dataset:
    """Four simulated-transient families (labels 1..4).

    Class 1 carries no sharp local pattern (slow drift only); classes 2-4
    add a damped oscillation, a smooth ramp, or a transient bump at a
    jittered onset, each living at a scale of roughly 30-50 points.
    """
    rng = np.random.default_rng(seed)
    rows, labels = [], []
    t = np.arange(length, dtype=float)
    for label in (1, 2, 3, 4):
        for _ in range(n_per_class):
            base = _smooth_noise(rng, length, 0.02)
            onset = int(rng.integers(70, 150))
            after = t >= onset
            if label == 1:
                period = rng.uniform(180, 260)
                base += 0.5 * np.sin(2 * np.pi * t / period + rng.uniform(0, 2 * np.pi))
            elif label == 2:
                tau = t[after] - onset
                base[after] += 1.0 + np.exp(-tau / 70.0) * np.sin(2 * np.pi * tau / 30.0)
            elif label == 3:
                base += 1.0 / (1.0 + np.exp(-(t - onset) / 8.0))
            else:
                base += 1.5 * np.exp(-0.5 * ((t - onset) / 12.0) ** 2)
            rows.append(base)
            labels.append(label)
    return _assemble(rows, labels, "Trace")


def _peaks(t: np.ndarray, spots: list[tuple[float, float, float]]) -> np.ndarray:
    out = np.zeros_like(t)
    for center, height, width in spots:
        out += height * np.exp(-0.5 * ((t - center) / width) ** 2)
    return out


def spectra_two_peaks(n_per_class: int = 28, length: int = 286, seed: int = 0) -> Dataset:
    """Two spectrum families differing in the ratio of two central peaks."""
    rng = np.random.default_rng(seed)
    rows, labels = [], []
    t = np.arange(length, dtype=float)
    shared = [(40, 0.5, 12), (90, 0.7, 15), (200, 0.45, 14), (250, 0.3, 10)]
    for label in (1, 2):
        h1, h2 = (1.0, 0.55) if label == 1 else (0.55, 1.0)
        for _ in range(n_per_class):
            spots = [
                (c + rng.normal(0, 1.5), h * rng.uniform(0.92, 1.08), w)
                for c, h, w in shared
            ]
            spots.append((125 + rng.normal(0, 1.5), h1 * rng.uniform(0.92, 1.08), 10))
            spots.append((160 + rng.normal(0, 1.5), h2 * rng.uniform(0.92, 1.08), 10))
            rows.append(_peaks(t, spots) + rng.normal(0, 0.01, length))
            labels.append(label)
    return _assemble(rows, labels, "Coffee")


def motion_bump(n_per_class: int = 100, length: int = 150, seed: int = 0) -> Dataset:
    """Raised-plateau motion profiles; class 2 adds small pre/post dips."""
    rng = np.random.default_rng(seed)
    rows, labels = [], []
    t = np.arange(length, dtype=float)
    for label in (1, 2):
        for _ in range(n_per_class):
            rise = rng.uniform(35, 50)
            fall = rng.uniform(100, 115)
            base = 1.0 / (1.0 + np.exp(-(t - rise) / 4.0)) - 1.0 / (1.0 + np.exp(-(t - fall) / 4.0))
            if label == 2:
                base -= 0.25 * np.exp(-0.5 * ((t - (rise - 14)) / 5.0) ** 2)
                base -= 0.25 * np.exp(-0.5 * ((t - (fall + 14)) / 5.0) ** 2)
            rows.append(base + rng.normal(0, 0.015, length))
            labels.append(label)
    return _assemble(rows, labels, "GunPoint")


def ecg_two_lead(n_per_class: int = 581, length: int = 82, seed: int = 0) -> Dataset:
    """Single heartbeats as seen from two different leads."""
    rng = np.random.default_rng(seed)
    rows, labels = [], []
    t = np.arange(length, dtype=float)
    for label in (1, 2):
        for _ in range(n_per_class):
            shift = rng.normal(0, 1.5)
            p = 0.15 * np.exp(-0.5 * ((t - 15 - shift) / 3.0) ** 2)
            if label == 1:
                qrs = 2.0 * np.exp(-0.5 * ((t - 40 - shift) / 1.8) ** 2)
                qrs -= 0.5 * np.exp(-0.5 * ((t - 45 - shift) / 2.2) ** 2)
                t_wave = 0.4 * np.exp(-0.5 * ((t - 62 - shift) / 5.0) ** 2)
            else:
                qrs = 1.1 * np.exp(-0.5 * ((t - 40 - shift) / 2.6) ** 2)
                qrs -= 1.0 * np.exp(-0.5 * ((t - 46 - shift) / 2.6) ** 2)
                t_wave = 0.7 * np.exp(-0.5 * ((t - 64 - shift) / 6.0) ** 2)
            rows.append(p + qrs + t_wave + rng.normal(0, 0.05, length))
            labels.append(label)
    return _assemble(rows, labels, "TwoLeadECG")


def outline_families(
    n_classes: int = 7, n_per_class: int = 30, length: int = 144, seed: int = 0
) -> Dataset:
    """Smooth outline profiles; each class gets its own bump layout."""
    rng = np.random.default_rng(seed)
    rows, labels = [], []
    t = np.arange(length, dtype=float)
    layouts = []
    layout_rng = np.random.default_rng(seed + 1)
    for _ in range(n_classes):
        n_bumps = int(layout_rng.integers(3, 6))
        layouts.append(
            [
                (layout_rng.uniform(15, length - 15), layout_rng.uniform(0.4, 1.2), layout_rng.uniform(6, 14))
                for _ in range(n_bumps)
            ]
        )
    for label in range(1, n_classes + 1):
        for _ in range(n_per_class):
            spots = [
                (c + rng.normal(0, 2.0), h * rng.uniform(0.9, 1.1), w * rng.uniform(0.9, 1.1))
                for c, h, w in layouts[label - 1]
            ]
            rows.append(_peaks(t, spots) + rng.normal(0, 0.02, length))
            labels.append(label)
    return _assemble(rows, labels, "Plane")


def spectra_subtle(n_per_class: int = 15, length: int = 570, seed: int = 0) -> Dataset:
    """Near-identical smooth spectra; classes move two peaks by a few percent."""
    rng = np.random.default_rng(seed)
    rows, labels = [], []
    t = np.arange(length, dtype=float)
    shared = [(80, 1.0, 30), (180, 0.8, 25), (300, 1.1, 40), (430, 0.6, 28), (520, 0.4, 18)]
    deltas = {1: (0.0, 0.0), 2: (0.04, -0.02), 3: (-0.03, 0.04), 4: (0.05, 0.05)}
    for label in (1, 2, 3, 4):
        d1, d2 = deltas[label]
        for _ in range(n_per_class):
            spots = list(shared)
            spots[1] = (spots[1][0], spots[1][1] * (1 + d1 + rng.normal(0, 0.005)), spots[1][2])
            spots[3] = (spots[3][0], spots[3][1] * (1 + d2 + rng.normal(0, 0.005)), spots[3][2])
            rows.append(_peaks(t, spots) + rng.normal(0, 0.002, length))
            labels.append(label)
    return _assemble(rows, labels, "OliveOil")


def contour_lobes(n_per_class: int = 20, length: int = 512, seed: int = 0) -> Dataset:
    """Closed-contour distance profiles with class-specific lobe counts."""
    rng = np.random.default_rng(seed)
    rows, labels = [], []
    t = np.linspace(0, 2 * np.pi, length, endpoint=False)
    for label in (1, 2):
        for _ in range(n_per_class):
            phase = rng.uniform(0, 2 * np.pi)
            if label == 1:
                base = 1.0 + 0.35 * np.abs(np.sin(3 * t + phase)) + 0.1 * np.sin(6 * t + phase)
            else:
                base = 1.0 + 0.4 * np.sin(2 * t + phase) + 0.08 * np.sin(5 * t + phase)
            rows.append(base + rng.normal(0, 0.02, length))
            labels.append(label)
    return _assemble(rows, labels, "BeetleFly")


def heartbeat_binary(n_normal: int = 133, n_abnormal: int = 67, length: int = 96, seed: int = 0) -> Dataset:
    """Noisy heartbeats: normal versus ischemia-like (labels 1, -1)."""
    rng = np.random.default_rng(seed)
    rows, labels = [], []
    t = np.arange(length, dtype=float)
    for label, count in ((1, n_normal), (-1, n_abnormal)):
        for _ in range(count):
            shift = rng.normal(0, 2.0)
            qrs_width = rng.uniform(1.6, 2.2) if label == 1 else rng.uniform(2.4, 3.4)
            qrs = 2.0 * np.exp(-0.5 * ((t - 30 - shift) / qrs_width) ** 2)
            qrs -= 0.45 * np.exp(-0.5 * ((t - 36 - shift) / 2.5) ** 2)
            t_height = rng.uniform(0.35, 0.6) if label == 1 else rng.uniform(-0.3, 0.05)
            t_wave = t_height * np.exp(-0.5 * ((t - 58 - shift) / 6.0) ** 2)
            st_dip = 0.0 if label == 1 else -0.15
            st = st_dip * ((t > 38 + shift) & (t < 52 + shift))
            rows.append(qrs + t_wave + st + rng.normal(0, 0.1, length))
            labels.append(label)
    return _assemble(rows, labels, "ECG200")


# name -> (generator, number of classes); sizes default to the archive ones
GENERATORS = {
    "Trace": (transient_families, 4),
    "CBF": (cylinder_bell_funnel, 3),
    "Coffee": (spectra_two_peaks, 2),
    "TwoLeadECG": (ecg_two_lead, 2),
    "GunPoint": (motion_bump, 2),
    "SyntheticControl": (control_charts, 6),
    "Plane": (outline_families, 7),
    "OliveOil": (spectra_subtle, 4),
    "BeetleFly": (contour_lobes, 2),
    "ECG200": (heartbeat_binary, 2),
}


def load_benchmark(name: str, seed: int = 0, ucr_root: str | Path | None = None) -> tuple[Dataset, int, str]:
    """Return (dataset, n_classes, source) for a named benchmark.

    Prefers real archive TSVs under ``ucr_root`` (or $SEQGRAPH_UCR_ROOT),
    reading TRAIN and TEST together; otherwise draws from the matching
    generator. ``source`` is "ucr" or "generated".
    """
    if name not in GENERATORS:
        raise KeyError(f"unknown benchmark {name!r}; known: {sorted(GENERATORS)}")
    root = ucr_root or os.environ.get(UCR_ROOT_ENV)
    if root:
        folder = Path(root) / name
        train = folder / f"{name}_TRAIN.tsv"
        test = folder / f"{name}_TEST.tsv"
        if train.is_file() and test.is_file():
            a = load_ucr_tsv(train, name)
            b = load_ucr_tsv(test, name)
            series = [
                TimeSeries(t.values, id=i)
                for i, t in enumerate(list(a.series) + list(b.series))
            ]
            labels = np.concatenate([a.labels, b.labels])
            dataset = Dataset(tuple(series), labels, name)
            return dataset, int(np.unique(labels).size), "ucr"
    generator, n_classes = GENERATORS[name]
    return generator(seed=seed), n_classes, "generated"
