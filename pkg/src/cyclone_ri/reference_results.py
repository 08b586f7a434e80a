"""Published figures for the two basins and strategies, kept for comparison with fresh runs.

Totals are stored as published. Where tables disagree with each other the disagreement is
recorded in `DISCREPANCIES` rather than corrected.
"""

from pydantic import BaseModel, ConfigDict

from .besttrack.types import Basin
from .extraction import StrategyName
from .records import ConfusionMatrixT


class ClassCountT(BaseModel):
    model_config = ConfigDict(frozen=True)

    positive: int
    negative: int
    total: int


class PublishedAccuracyT(BaseModel):
    model_config = ConfigDict(frozen=True)

    mean: float
    std: float


class YearSplitT(BaseModel):
    model_config = ConfigDict(frozen=True)

    train_years: tuple[int, int]
    test_years: tuple[int, int]
    train_cyclones: int
    test_cyclones: int


YEAR_SPLITS: dict[Basin, YearSplitT] = {
    Basin.SOUTH_PACIFIC: YearSplitT(train_years=(1985, 2005), test_years=(2006, 2013), train_cyclones=219, test_cyclones=71),
    Basin.SOUTH_INDIAN: YearSplitT(train_years=(1985, 2001), test_years=(2002, 2013), train_cyclones=285, test_cyclones=190),
}

# Strategy I window counts: (train, test)
CLASS_COUNTS: dict[Basin, tuple[ClassCountT, ClassCountT]] = {
    Basin.SOUTH_PACIFIC: (
        ClassCountT(positive=155, negative=4798, total=4953),
        ClassCountT(positive=7, negative=2002, total=2009),
    ),
    Basin.SOUTH_INDIAN: (
        ClassCountT(positive=190, negative=6887, total=7077),
        ClassCountT(positive=70, negative=6676, total=6746),
    ),
}

ACCURACIES: dict[tuple[Basin, StrategyName], PublishedAccuracyT] = {
    (Basin.SOUTH_INDIAN, StrategyName.I): PublishedAccuracyT(mean=97.390, std=0.008),
    (Basin.SOUTH_INDIAN, StrategyName.II): PublishedAccuracyT(mean=81.736, std=0.219),
    (Basin.SOUTH_PACIFIC, StrategyName.I): PublishedAccuracyT(mean=97.214, std=0.013),
    (Basin.SOUTH_PACIFIC, StrategyName.II): PublishedAccuracyT(mean=79.779, std=0.169),
}

# best of 30 runs on the test set
BEST_CONFUSIONS: dict[tuple[Basin, StrategyName], ConfusionMatrixT] = {
    (Basin.SOUTH_PACIFIC, StrategyName.I): ConfusionMatrixT(tp=0, fn=7, fp=2, tn=1999),
    (Basin.SOUTH_INDIAN, StrategyName.I): ConfusionMatrixT(tp=0, fn=70, fp=7, tn=6669),
    (Basin.SOUTH_PACIFIC, StrategyName.II): ConfusionMatrixT(tp=50, fn=308, fp=66, tn=1452),
    (Basin.SOUTH_INDIAN, StrategyName.II): ConfusionMatrixT(tp=381, fn=837, fp=316, tn=4835),
}

DISCREPANCIES: list[str] = [
    "South Pacific Strategy I: test set holds 2009 windows but the best-run confusion matrix totals 2008",
    "Strategy II best-run confusion matrices total 1876 (South Pacific) and 6369 (South Indian), "
    "fewer than the 2009 and 6746 test windows counted for Strategy I",
    "Strategy I best-run accuracies (99.55% South Pacific, 98.86% South Indian) lie far above the "
    "published mean plus its standard deviation",
]


def published_accuracy(basin: Basin, strategy: StrategyName) -> PublishedAccuracyT:
    try:
        return ACCURACIES[(basin, strategy)]
    except KeyError:
        raise ValueError(f"No published accuracy for {basin.value} strategy {strategy.value}") from None


def published_confusion(basin: Basin, strategy: StrategyName) -> ConfusionMatrixT:
    try:
        return BEST_CONFUSIONS[(basin, strategy)]
    except KeyError:
        raise ValueError(f"No published confusion matrix for {basin.value} strategy {strategy.value}") from None
