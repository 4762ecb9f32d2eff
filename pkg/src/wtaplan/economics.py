"""Annuitised facility costs and levelised costs of electricity, hydrogen and ammonia.

Units: money in EUR, time in days, electricity in kWh (inputs in MWh/d and MW
are converted here), hydrogen and ammonia in kg.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .data_io import EconomicParams

DAYS_PER_YEAR = 365.0
KWH_PER_MWH = 1000.0
KW_PER_MW = 1000.0


class CostDomainError(ValueError):
    pass


def annuity(rate: float, years: float) -> float:
    """Capital recovery factor ``i (1+i)^n / ((1+i)^n - 1)``; ``1/n`` at ``i = 0``."""
    if years < 1:
        raise CostDomainError(f"lifetime must be >= 1 year, got {years}")
    if not 0 <= rate < 1:
        raise CostDomainError(f"discount rate must lie in [0, 1), got {rate}")
    if rate == 0:
        return 1.0 / years
    g = (1.0 + rate) ** years
    return rate * g / (g - 1.0)


def annualized_daily_cost(unit_cost: float, capacity: float, lifetime: float,
                          fixopex_ratio: float, discount_rate: float) -> float:
    """Daily share of capital recovery plus fixed OPEX for ``capacity`` units."""
    if capacity < 0:
        raise CostDomainError("capacity must be non-negative")
    return unit_cost * capacity * (annuity(discount_rate, lifetime) + fixopex_ratio) / DAYS_PER_YEAR


@dataclass(frozen=True)
class CostBreakdown:
    """One facility's daily cost in EUR/d."""

    capex: float = 0.0
    fixopex: float = 0.0
    varopex: float = 0.0

    @property
    def total(self) -> float:
        return self.capex + self.fixopex + self.varopex

    def __add__(self, other: "CostBreakdown") -> "CostBreakdown":
        return CostBreakdown(self.capex + other.capex, self.fixopex + other.fixopex,
                             self.varopex + other.varopex)


def facility_cost(econ: EconomicParams, name: str, capacity: float,
                  varopex: float = 0.0) -> CostBreakdown:
    """Daily cost of ``capacity`` units of facility ``name`` (kW or kg, per Table IV units)."""
    f = econ.facility(name)
    if capacity < 0:
        raise CostDomainError("capacity must be non-negative")
    capex = f.unit_cost * capacity * annuity(econ.discount_rate, f.lifetime) / DAYS_PER_YEAR
    fix = f.unit_cost * capacity * f.fixopex / DAYS_PER_YEAR
    return CostBreakdown(capex, fix, varopex)


def daily_rate(econ: EconomicParams, name: str) -> float:
    """EUR/d per unit of capacity (kW, kg H2 or kg/d H2 carried)."""
    f = econ.facility(name)
    return annualized_daily_cost(f.unit_cost, 1.0, f.lifetime, f.fixopex, econ.discount_rate)


# -- per-kg constants ---------------------------------------------------------

def water_cost_per_kg_h2(econ: EconomicParams) -> float:
    return float(econ.c_water / econ.k_wth)


def nitrogen_cost_per_kg_nh3(econ: EconomicParams) -> float:
    return float(econ.c_n2 / econ.k_nta)


def wheeling_cost_per_kg_nh3(econ: EconomicParams) -> float:
    """Wheeling charge carried by one kg of ammonia made from imported electricity."""
    return float(econ.c_en / econ.eta_wta)


# -- levelised costs ----------------------------------------------------------

def lcoe(E: float, P_re: float, econ: EconomicParams) -> float:
    """EUR/kWh for ``E`` MWh/d generated by ``P_re`` MW of turbines."""
    if E <= 0:
        raise CostDomainError(f"LCOE needs E > 0, got {E}")
    return facility_cost(econ, "re", P_re * KW_PER_MW).total / (E * KWH_PER_MWH)


def lcoh(lcoe_value: float, E_local: float, P_el: float, econ: EconomicParams) -> float:
    """EUR/kg H2 from ``E_local`` MWh/d electrolysed in ``P_el`` MW of cells."""
    if E_local <= 0:
        raise CostDomainError(f"LCOH needs E_local > 0, got {E_local}")
    eta = float(econ.eta_wth)
    h2 = eta * E_local * KWH_PER_MWH
    el = facility_cost(econ, "el", P_el * KW_PER_MW, varopex=h2 * water_cost_per_kg_h2(econ))
    return lcoe_value / eta + el.total / h2


def lcoa_local(lcoh_value: float, A_L: float, buffer_cost: float, econ: EconomicParams) -> float:
    """EUR/kg NH3 for ``A_L`` kg/d made from local hydrogen; ``buffer_cost`` in EUR/d."""
    if A_L <= 0:
        raise CostDomainError(f"local LCOA needs A_L > 0, got {A_L}")
    return lcoh_value / float(econ.k_hta) + buffer_cost / A_L + nitrogen_cost_per_kg_nh3(econ)


def lcoa_en(imports: Iterable[tuple[float, float]], P_el: float, buffer_cost: float,
            A_E: float, econ: EconomicParams) -> float:
    """EUR/kg NH3 for ``A_E`` kg/d made from imported electricity.

    ``imports`` holds ``(E MWh/d, source LCOE EUR/kWh)`` pairs; the demand-side
    electrolyzer has ``P_el`` MW and the buffer costs ``buffer_cost`` EUR/d.
    """
    if A_E <= 0:
        raise CostDomainError(f"EN LCOA needs A_E > 0, got {A_E}")
    imports = list(imports)
    kwh = sum(E for E, _ in imports) * KWH_PER_MWH
    if any(E < 0 for E, _ in imports):
        raise CostDomainError("imports must be non-negative")
    power = sum(E * KWH_PER_MWH * c for E, c in imports)
    h2 = float(econ.eta_wth) * kwh
    el = facility_cost(econ, "el", P_el * KW_PER_MW, varopex=h2 * water_cost_per_kg_h2(econ))
    wheeling = econ.c_en * kwh
    n2 = nitrogen_cost_per_kg_nh3(econ) * A_E
    return (power + el.total + buffer_cost + wheeling + n2) / A_E


def lcoa_hsc(imports: Iterable[tuple[float, float]], transport_cost: float, storage_cost: float,
             A_H: float, econ: EconomicParams) -> float:
    """EUR/kg NH3 for ``A_H`` kg/d made from trucked hydrogen.

    ``imports`` holds ``(H kg/d, source LCOH EUR/kg)`` pairs; ``transport_cost``
    (trucks, trailers and diesel) and ``storage_cost`` are in EUR/d.
    """
    if A_H <= 0:
        raise CostDomainError(f"HSC LCOA needs A_H > 0, got {A_H}")
    h2 = sum(H * c for H, c in imports)
    n2 = nitrogen_cost_per_kg_nh3(econ) * A_H
    return (h2 + transport_cost + storage_cost + n2) / A_H


@dataclass(frozen=True)
class CtaComparison:
    production_t: float  # t NH3 / yr
    lcoa_gap: float | None  # EUR/kg, WtA minus CtA
    coal_saved_tce: float
    co2_avoided_t: float


def cta_comparison(production_t: float, wta_lcoa: float | None, econ: EconomicParams) -> CtaComparison:
    """Coal and CO2 displaced by making ``production_t`` t/yr of ammonia from wind."""
    if production_t < 0:
        raise CostDomainError("production must be non-negative")
    gap = None if wta_lcoa is None else wta_lcoa - econ.cta_lcoa
    return CtaComparison(production_t, gap, float(production_t * econ.coal_factor),
                         float(production_t * econ.co2_factor))
