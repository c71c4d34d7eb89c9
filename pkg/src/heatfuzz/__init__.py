"""Fuzzy rule-base heat index modelling: learn, predict, evaluate."""

from .dataset import Dataset, Sample, describe, iqr_clean, parse_csv, pearson, split_train_test, write_csv
from .evaluation import LinearModel, Metrics, compute_metrics, error_analysis, f_test, fit_mlr, predict_mlr
from .fuzzy import Partition, TriangularMf, Universe, build_partition, classify_max, fuzzify, membership
from .inference import ConsequentCenters, optimize_offsets, predict_batch, predict_one
from .rules import FuzzyRule, RuleBase, learn_rules, load_model, render_rules, save_model
from .synth import GeneratorConfig, generate, heat_index_noaa

__version__ = "0.1.0"
