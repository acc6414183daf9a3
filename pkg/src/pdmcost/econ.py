"""Economic cost engine for comparing maintenance strategies.

All durations are in hours, all money in dollars. A purely reactive policy
pays ticket, service, and full downtime cost for every incident. A
predictive policy saves part of that for every correctly predicted failure
(true positive) but pays service, downtime, and premature-replacement cost
for every false alarm (false positive). Missed failures (false negatives)
still pay the full reactive price.

The resulting savings are affine in the confusion counts,

    S = a * TP - b * FP + c,

where the coefficients depend on the scheduling gap and the length of the
prediction interval: a long lead time lets the repair crew arrive before the
expected failure (less downtime saved per TP, but also less downtime billed
per FP), while a long prediction interval increases the expected life thrown
away when a healthy component is replaced early.
"""

from __future__ import annotations

from dataclasses import dataclass

from .metrics import ConfusionCounts

__all__ = [
    "CostModel",
    "AffineCost",
    "CostLine",
    "expected_downtime",
    "affine_coefficients",
    "savings",
    "reactive_cost",
    "pdm_cost",
    "itemize_costs",
]


@dataclass(frozen=True)
class CostModel:
    """Per-incident cost constants of a maintenance business case.

    The defaults describe a field-service scenario: a $32 ticket, $51 of
    service labour, downtime billed at $2/h, a 6 h preparation/travel time,
    a 2 h repair, and a replacement component whose value amortizes to
    0.12 $/h over a one-year expected life.
    """

    ticket_cost: float = 32.0
    service_cost: float = 51.0
    downtime_rate: float = 2.0
    travel_time_h: float = 6.0
    repair_time_h: float = 2.0
    component_cost: float = 1051.2
    expected_life_h: float = 8760.0

    def __post_init__(self) -> None:
        for name in (
            "ticket_cost",
            "service_cost",
            "downtime_rate",
            "travel_time_h",
            "repair_time_h",
            "component_cost",
        ):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")
        if self.expected_life_h <= 0:
            raise ValueError("expected_life_h must be > 0")

    @property
    def value_loss_rate(self) -> float:
        """Component value lost per hour of foregone operating life ($/h)."""
        return self.component_cost / self.expected_life_h


@dataclass(frozen=True)
class AffineCost:
    """Savings function S(TP, FP) = a*TP - b*FP + c.

    ``b`` is stored as the positive magnitude of the false-positive penalty;
    the minus sign is applied when the function is evaluated. ``gap_h`` and
    ``pred_h`` record the window geometry the coefficients were derived for.
    """

    a: float
    b: float
    c: float = 0.0
    gap_h: float = 0.0
    pred_h: float = 0.0

    def value(self, tp: float, fp: float) -> float:
        """Evaluate the savings at (possibly fractional) confusion counts."""
        return self.a * tp - self.b * fp + self.c


@dataclass(frozen=True)
class CostLine:
    """One component row of an itemized cost report."""

    component: str
    current: float
    future: float

    @property
    def delta(self) -> float:
        return self.current - self.future


def expected_downtime(gap_h: float, pred_h: float, cm: CostModel) -> float:
    """Expected hours a device stays down per (correctly handled) incident.

    Failures are assumed uniform over the prediction interval, so the crew
    dispatched at prediction time targets its midpoint. If preparation and
    travel take longer than gap + half the prediction interval, the overshoot
    adds to the unavoidable repair time; otherwise only the repair itself
    counts. Purely reactive handling corresponds to gap_h = pred_h = 0.
    """
    if gap_h < 0 or pred_h < 0:
        raise ValueError("gap_h and pred_h must be >= 0")
    return max(0.0, cm.travel_time_h - gap_h - pred_h / 2.0) + cm.repair_time_h


def affine_coefficients(cm: CostModel, gap_h: float, pred_h: float) -> AffineCost:
    """Derive the per-TP gain and per-FP penalty for a window geometry.

    Per true positive the operator saves the ticket plus the downtime
    avoided relative to reactive handling. Per false positive the operator
    pays service, the expected downtime of the unnecessary intervention, and
    the value of component life thrown away (half the prediction interval on
    average, priced at the amortized component value).
    """
    dt_reactive = expected_downtime(0.0, 0.0, cm)
    dt = expected_downtime(gap_h, pred_h, cm)
    a = cm.ticket_cost + cm.downtime_rate * (dt_reactive - dt)
    b = cm.service_cost + cm.downtime_rate * dt + cm.value_loss_rate * pred_h / 2.0
    return AffineCost(a=a, b=b, c=0.0, gap_h=gap_h, pred_h=pred_h)


def savings(counts: ConfusionCounts | tuple[float, float], ac: AffineCost) -> float:
    """Dollar savings of a predictive policy over the reactive baseline.

    ``counts`` is either a ConfusionCounts or a plain (tp, fp) pair; the
    latter admits fractional counts, e.g. points sampled along an
    iso-savings line.
    """
    if isinstance(counts, ConfusionCounts):
        tp, fp = counts.tp, counts.fp
    else:
        tp, fp = counts
    return ac.value(tp, fp)


def reactive_cost(p: float, cm: CostModel) -> float:
    """Total cost of handling ``p`` incidents purely reactively."""
    if p < 0:
        raise ValueError("incident count must be >= 0")
    per_incident = (
        cm.ticket_cost
        + cm.service_cost
        + cm.downtime_rate * expected_downtime(0.0, 0.0, cm)
    )
    return p * per_incident


def pdm_cost(
    counts: ConfusionCounts, cm: CostModel, gap_h: float, pred_h: float
) -> float:
    """Total maintenance cost under the predictive policy.

    Equals the reactive baseline minus the savings: false negatives pay the
    full reactive price, true positives pay the reduced predictive price,
    and false positives add pure overhead.
    """
    ac = affine_coefficients(cm, gap_h, pred_h)
    return reactive_cost(counts.p, cm) - savings(counts, ac)


def itemize_costs(
    counts: ConfusionCounts, cm: CostModel, gap_h: float, pred_h: float
) -> list[CostLine]:
    """Break total cost into components under both policies.

    Returns one row per cost component with the reactive ("current") and
    predictive ("future") totals; the deltas sum to ``savings`` and the
    future column sums to ``pdm_cost``.
    """
    dt_reactive = expected_downtime(0.0, 0.0, cm)
    dt = expected_downtime(gap_h, pred_h, cm)
    tp, fp, fn, p = counts.tp, counts.fp, counts.fn, counts.p
    return [
        CostLine("ticket", cm.ticket_cost * p, cm.ticket_cost * fn),
        CostLine("service", cm.service_cost * p, cm.service_cost * (fn + tp + fp)),
        CostLine(
            "downtime",
            cm.downtime_rate * dt_reactive * p,
            cm.downtime_rate * (dt_reactive * fn + dt * (tp + fp)),
        ),
        CostLine("component_value", 0.0, cm.value_loss_rate * pred_h / 2.0 * fp),
    ]
