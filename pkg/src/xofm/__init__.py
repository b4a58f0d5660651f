"""Explainable ordinal factorization model.

Ordinal regression with piecewise-linear attribute score functions,
factorized pairwise interactions, pairwise-margin SGD training and
class assignment by comparison with training-set scores.
"""

from .dataset_io import DataError, Dataset, SplitSpec, kfold, load_csv, random_split
from .encoding import Discretization, build_discretization, encode, encode_dataset
from .evaluation import Metrics, TrialSummary, accuracy, cross_validate, mae, run_trials
from .explain import ScoreFunctionTable, InteractionMatrix, export_report, interaction_matrix, score_function
from .fm import ModelFormatError, ModelParams, link_score, link_score_fast, load_model, save_model
from .inference import ClassInterval, Prediction, class_interval, kappa, predict, predict_batch
from .training import Hyperparams, PairSet, TrainingError, fit, pair_gradient, pairwise_loss, train_monotone, train_sgd

__version__ = "0.1.0"
