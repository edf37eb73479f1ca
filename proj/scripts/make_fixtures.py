#!/usr/bin/env python3
"""Generate the calibrated European bank fixture dataset under fixtures/.

The fixture is synthetic: no row corresponds to a real institution. It is
constructed by inverting published aggregate statistics so that the pipeline
reproduces them:

  * status-level funding mixes (all-bank equity 4.5%, customer deposits
    35.2%, bank deposits 15.7%, long-term debt 18.9%, other 25.5%;
    nationalized equity 2.9% / long-term 40.8%),
  * impairment totals (~EUR 535bn for failed banks, ~EUR 940bn overall,
    2008-2012),
  * bail-in write-down fractions per country/status cell (nationalized
    aggregate senior 6.9%, Ireland 24.6%/64.5%, Greece 77.8%, Great Britain
    subordinated 75.5%, Portugal subordinated 50%, ...),
  * the 20%-of-assets stress outcome for surviving banks (senior 77%) and
    the recapitalized stress-to-actual multiplier of 5.0x.

Senior/subordinated split: source tables report only combined long-term
debt, so the split is a modelling choice. We use, per status pool:
  nationalized   subordinated 6.80 / senior 34.00  (pct of liabilities+equity)
  recapitalized  varies per country cell; pooled approx. 2.58 / 15.05
  surviving      subordinated 12.69 / senior 3.00
chosen so that (a) every cell keeps bail-inable capacity above 20% of
assets (depositors are never hit at the 20% stress level), (b) the pooled
all-bank senior share exceeds the subordinated share, and (c) the pinned
write-down fractions are reproduced exactly.

All amounts are integer EUR. Cell-level targets are computed with exact
rational arithmetic and apportioned to banks by the largest-remainder
method, so cell and pool sums match the design values to the euro.

Run from the repository root:  python3 scripts/make_fixtures.py
"""

from fractions import Fraction
import csv
import os
import sys

BP = Fraction(1, 10_000)  # one basis point as a fraction

T_ALL = 20_150_000_000_000  # EUR, aggregate 2006 liabilities-and-equity

# status weights, basis points of T_ALL
W_NAT, W_REC, W_SUR = 1_000, 3_625, 5_375

# per-status totals (exact integers by construction)
T_NAT = T_ALL * W_NAT * BP
T_REC = T_ALL * W_REC * BP
T_SUR = T_ALL * W_SUR * BP

# fixed-point helpers ------------------------------------------------------


def rnd(x: Fraction) -> int:
    """Round a Fraction to the nearest integer, half away from zero."""
    sign = -1 if x < 0 else 1
    x = abs(x)
    n = x.numerator // x.denominator
    rem = x - n
    if rem * 2 >= 1:
        n += 1
    return sign * n


def apportion(total: int, weights) -> list[int]:
    """Split `total` into integers proportional to `weights` (largest
    remainder, ties to the lowest index); the parts sum to `total`."""
    wsum = sum(weights)
    raw = [Fraction(total * w, wsum) for w in weights]
    parts = [r.numerator // r.denominator for r in raw]
    shortfall = total - sum(parts)
    order = sorted(range(len(raw)), key=lambda i: (-(raw[i] - parts[i]), i))
    for i in order[:shortfall]:
        parts[i] += 1
    return parts


def bank_weights(n: int) -> list[int]:
    """Descending integer size weights for the n banks of a cell."""
    return list(range(n, 0, -1))


# cell design --------------------------------------------------------------

# shares are in basis points of the cell total; they must sum to 10 000
NAT_MIX = dict(e=290, s=680, n=3400, d=2000, b=1500, o=2130)
SUR_MIX = dict(e=500, s=1269, n=300, d=3162, b=1816, o=2953)

F = Fraction


class Cell:
    def __init__(self, country, status, weight_bp, banks, mix, loss):
        self.country = country
        self.status = status          # 'nationalized'|'recapitalized'|'surviving'
        self.weight_bp = weight_bp    # of the status total
        self.banks = banks
        self.mix = mix                # category -> basis points
        self.loss = loss              # Fraction of cell total, or None (set later)


def frac_rule(e_bp, s_bp, n_bp, f_eq=None, f_sub=None, f_sen=None):
    """Loss as a fraction of the cell total implied by target write-down
    fractions: juniors of a partially hit class are fully wiped."""
    e, s, n = F(e_bp) * BP, F(s_bp) * BP, F(n_bp) * BP
    if f_eq is not None:
        return e * f_eq
    if f_sub is not None:
        return e + s * f_sub
    return e + s + n * f_sen


NAT_CELLS = [
    Cell("AT", "nationalized", 600, 1, NAT_MIX, frac_rule(290, 680, 3400, f_sen=F(5, 100))),
    Cell("DE", "nationalized", 2800, 3, NAT_MIX, frac_rule(290, 680, 3400, f_sen=F(6, 100))),
    Cell("GB", "nationalized", 3000, 5, NAT_MIX, frac_rule(290, 680, 3400, f_sen=F(0))),
    Cell("IE", "nationalized", 2000, 4, NAT_MIX, frac_rule(290, 680, 3400, f_sen=F(246, 1000))),
    Cell("NL", "nationalized", 1600, 2, NAT_MIX, frac_rule(290, 680, 3400, f_sen=F(0))),
]

REC_BAL_MIX = dict(e=430, s=90, n=1550, d=4550, b=1170, o=2210)
REC_CELLS = [
    Cell("AT", "recapitalized", 300, 3, dict(e=450, s=350, n=1400, d=4500, b=1500, o=1800),
         frac_rule(450, 350, 1400, f_eq=F(8, 10))),
    Cell("DE", "recapitalized", 1000, 6, dict(e=350, s=450, n=1800, d=3500, b=2000, o=1900),
         frac_rule(350, 450, 1800, f_sen=F(3, 100))),
    Cell("GB", "recapitalized", 1200, 5, dict(e=400, s=800, n=1000, d=5000, b=1000, o=1800),
         frac_rule(400, 800, 1000, f_sub=F(755, 1000))),
    Cell("GR", "recapitalized", 350, 4, dict(e=450, s=550, n=1709, d=4200, b=1100, o=1991),
         frac_rule(450, 550, 1709, f_sen=F(778, 1000))),
    Cell("IE", "recapitalized", 400, 2, dict(e=400, s=400, n=1600, d=4500, b=1200, o=1900),
         frac_rule(400, 400, 1600, f_sen=F(645, 1000))),
    Cell("PT", "recapitalized", 200, 2, dict(e=500, s=600, n=1200, d=4800, b=1200, o=1700),
         frac_rule(500, 600, 1200, f_sub=F(1, 2))),
    # balancer cells: losses stay inside equity so that the pooled
    # recapitalized outcome is an equity-only bail-in at exactly 4.0% of assets
    Cell("FR", "recapitalized", 1500, 8, REC_BAL_MIX, None),
    Cell("ES", "recapitalized", 1200, 10, REC_BAL_MIX, None),
    Cell("IT", "recapitalized", 1200, 9, REC_BAL_MIX, None),
    Cell("NL", "recapitalized", 1000, 4, REC_BAL_MIX, None),
    Cell("BE", "recapitalized", 600, 3, REC_BAL_MIX, None),
    Cell("DK", "recapitalized", 500, 4, REC_BAL_MIX, None),
    Cell("SE", "recapitalized", 550, 6, REC_BAL_MIX, None),
]

# (country, banks, weight_bp, loss_weight_bp)
SUR_SPEC = [
    ("ES", 85, 1300, 2000), ("GB", 55, 1600, 1800), ("IT", 90, 1100, 1600),
    ("DE", 180, 2000, 1200), ("FR", 75, 1500, 1200), ("AT", 60, 500, 400),
    ("NL", 25, 600, 500), ("BE", 20, 400, 300), ("DK", 30, 300, 300),
    ("SE", 25, 400, 300), ("GR", 12, 80, 100), ("IE", 14, 120, 200),
    ("PT", 20, 100, 100),
]
SUR_CELLS = [Cell(c, "surviving", w, n, SUR_MIX, None) for c, n, w, _ in SUR_SPEC]

L_SUR_TOTAL = 405_000_000_000  # EUR

COUNTRY_NAMES = {
    "AT": "Austria", "BE": "Belgium", "DE": "Germany", "DK": "Denmark",
    "ES": "Spain", "FR": "France", "GB": "Great Britain", "GR": "Greece",
    "IE": "Ireland", "IT": "Italy", "NL": "Netherlands", "PT": "Portugal",
    "SE": "Sweden",
}
STATUS_LETTER = {"nationalized": "N", "recapitalized": "R", "surviving": "S"}
YEAR_SPLIT = [(2008, 22), (2009, 34), (2010, 18), (2011, 16), (2012, 10)]
COMPONENT_SPLIT = [70, 18, 12]  # loan writedowns / non-recurring / securities


def build():
    status_total = {"nationalized": T_NAT, "recapitalized": T_REC, "surviving": T_SUR}
    cells = NAT_CELLS + REC_CELLS + SUR_CELLS

    for c in cells:
        assert sum(c.mix.values()) == 10_000, (c.country, c.status)
        c.total = int(status_total[c.status] * c.weight_bp * BP)
        assert c.total == status_total[c.status] * c.weight_bp * BP

    # losses: pinned cells from their rules, balancers fill to the pooled target
    rec_pinned = [c for c in REC_CELLS if c.loss is not None]
    rec_bal = [c for c in REC_CELLS if c.loss is None]
    for c in NAT_CELLS + rec_pinned:
        c.loss_eur = rnd(c.loss * c.total)
    rec_target = rnd(F(4, 100) * T_REC)
    bal_total = rec_target - sum(c.loss_eur for c in rec_pinned)
    assert bal_total > 0
    for c, amt in zip(rec_bal, apportion(bal_total, [c.weight_bp for c in rec_bal])):
        c.loss_eur = amt
        # balancer losses must stay strictly inside the cell equity
        assert amt < c.total * c.mix["e"] * BP
    sur_losses = apportion(L_SUR_TOTAL, [lw for _, _, _, lw in SUR_SPEC])
    for c, amt in zip(SUR_CELLS, sur_losses):
        c.loss_eur = amt

    banks, balances, impairments = [], [], []
    seq = {}
    for c in cells:
        letter = STATUS_LETTER[c.status]
        start = seq.get((c.country, letter), 0)
        seq[(c.country, letter)] = start + c.banks
        wts = bank_weights(c.banks)

        ids = []
        for k in range(c.banks):
            nn = start + k + 1
            bid = f"{c.country}{letter}{nn:03d}"
            ids.append(bid)
            banks.append((bid, f"{COUNTRY_NAMES[c.country]} {c.status.capitalize()} {nn:03d}",
                          c.country, c.status))

        # balance sheets: split the cell total into category targets (so the
        # cell sums to its design value exactly), then each target over banks
        for year, scale in ((2006, F(1)), (2007, F(21, 20))):
            order = ("e", "s", "n", "d", "b", "o")
            targets = apportion(rnd(c.total * scale), [c.mix[cat] for cat in order])
            cols = {cat: apportion(target, wts)
                    for cat, target in zip(order, targets)}
            for k, bid in enumerate(ids):
                row = [cols[cat][k] for cat in ("e", "s", "n", "d", "b", "o")]
                balances.append((bid, year, *row, sum(row)))

        # impairments: bank loss -> per-year -> per-component
        per_bank = apportion(c.loss_eur, wts)
        for k, bid in enumerate(ids):
            per_year = apportion(per_bank[k], [w for _, w in YEAR_SPLIT])
            for (year, _), amt in zip(YEAR_SPLIT, per_year):
                wr, nre, sec = apportion(amt, COMPONENT_SPLIT)
                if c.status == "surviving" and k % 7 == 3 and year == 2012 and sec > 0:
                    # book a partial recovery on securities, offset in writedowns
                    rec_amt = sec // 2
                    wr += sec + rec_amt
                    sec = -rec_amt
                impairments.append((bid, year, wr, nre, sec))

    # two consolidated subsidiaries, removed via the exclusions file
    extras = [
        ("GBR002S", "Great Britain Recapitalized 002 Subsidiary", "GB", "recapitalized"),
        ("DES001S", "Germany Surviving 001 Subsidiary", "DE", "surviving"),
    ]
    for bid, name, cc, status in extras:
        banks.append((bid, name, cc, status))
        base = [400_000_000, 150_000_000, 800_000_000, 5_000_000_000,
                900_000_000, 1_200_000_000]
        balances.append((bid, 2006, *base, sum(base)))
        b07 = [rnd(F(21, 20) * v) for v in base]
        balances.append((bid, 2007, *b07, sum(b07)))
        for (year, w) in YEAR_SPLIT:
            wr, nre, sec = apportion(w * 1_000_000, COMPONENT_SPLIT)
            impairments.append((bid, year, wr, nre, sec))

    return cells, banks, balances, impairments, [e[0] for e in extras]


# verification oracle ------------------------------------------------------


def waterfall(loss, caps):
    """Sequential-subtraction reference: returns per-class absorbed."""
    out, remaining = [], loss
    for cap in caps:
        a = min(remaining, cap)
        out.append(a)
        remaining -= a
    return out


def verify(cells, banks, balances, impairments, excluded):
    ok = True

    def check(label, got, target, tol):
        nonlocal ok
        good = abs(got - target) <= tol
        ok &= good
        print(f"  {'ok  ' if good else 'FAIL'} {label}: {float(got):.6g} "
              f"(target {float(target)}, tol {float(tol)})")

    bal06 = {}
    for row in balances:
        if row[1] == 2006 and row[0] not in excluded:
            bal06[row[0]] = row[2:8]
    status_of = {b[0]: b[3] for b in banks}
    country_of = {b[0]: b[2] for b in banks}
    loss_of = {}
    for bid, _, wr, nre, sec in impairments:
        if bid not in excluded:
            loss_of[bid] = loss_of.get(bid, 0) + wr + nre + sec

    def pool(pred):
        tot = [0] * 6
        loss = 0
        for bid, cats in bal06.items():
            if pred(bid):
                tot = [a + b for a, b in zip(tot, cats)]
                loss += max(0, loss_of.get(bid, 0))
        return tot, loss

    pp = Fraction(1, 1000)  # 0.1 percentage point as a fraction

    print("funding mix, all banks:")
    tot, _ = pool(lambda b: True)
    T = sum(tot)
    e, s, n, d, bdep, o = (Fraction(x, T) for x in tot)
    check("customer deposits", d, F(352, 1000), pp)
    check("bank deposits", bdep, F(157, 1000), pp)
    check("equity", e, F(45, 1000), pp)
    check("long-term debt", s + n, F(189, 1000), pp)
    check("other liabilities", o, F(255, 1000), pp)
    assert n > s, "senior must be the majority of long-term debt"

    print("funding mix, nationalized:")
    tot, nat_loss = pool(lambda b: status_of[b] == "nationalized")
    Tn = sum(tot)
    check("equity", Fraction(tot[0], Tn), F(29, 1000), pp)
    check("long-term debt", Fraction(tot[1] + tot[2], Tn), F(408, 1000), pp)

    print("impairment totals:")
    _, rec_loss = pool(lambda b: status_of[b] == "recapitalized")
    _, sur_loss = pool(lambda b: status_of[b] == "surviving")
    failed = nat_loss + rec_loss
    check("failed banks (EUR bn)", F(failed, 10**9), 535, F(535, 200))
    check("all banks (EUR bn)", F(failed + sur_loss, 10**9), 940, F(940, 200))

    def fractions_for(pred):
        tot, loss = pool(pred)
        caps = [tot[0], tot[1], tot[2], tot[3]]
        absorbed = waterfall(loss, caps)
        return [Fraction(a, c) if c else F(0) for a, c in zip(absorbed, caps)], tot, loss

    print("bail-in fractions (actual losses, 2006 base):")
    fr, _, _ = fractions_for(lambda b: status_of[b] == "nationalized")
    check("nationalized equity", fr[0], 1, 0)
    check("nationalized subordinated", fr[1], 1, 0)
    check("nationalized senior", fr[2], F(69, 1000), pp)
    fr, _, _ = fractions_for(lambda b: status_of[b] == "recapitalized")
    check("recapitalized equity", fr[0], F(4000, 4199), pp)
    check("recapitalized subordinated", fr[1], 0, 0)
    for cc, st, cls, target in [("GR", "recapitalized", 2, F(778, 1000)),
                                ("IE", "nationalized", 2, F(246, 1000)),
                                ("IE", "recapitalized", 2, F(645, 1000)),
                                ("GB", "recapitalized", 1, F(755, 1000)),
                                ("PT", "recapitalized", 1, F(500, 1000))]:
        fr, _, _ = fractions_for(lambda b, cc=cc, st=st: country_of[b] == cc and status_of[b] == st)
        label = ["equity", "subordinated", "senior"][cls]
        check(f"{cc} {st} {label}", fr[cls], target, pp)

    print("stress at 20% of assets:")
    tot, _ = pool(lambda b: status_of[b] == "surviving")
    Ts = sum(tot)
    caps = [tot[0], tot[1], tot[2], tot[3]]
    absorbed = waterfall(Fraction(Ts, 5), caps)
    check("surviving senior", Fraction(absorbed[2], caps[2]), F(77, 100), F(1, 100))
    assert absorbed[3] == 0
    tot, loss = pool(lambda b: status_of[b] == "recapitalized")
    check("recapitalized stress multiplier", Fraction(sum(tot), 5) / loss, 5, F(5, 100))

    print("depositor protection (every country/status cell, alpha=0.20):")
    worst = F(1)
    for c in cells:
        tot, loss = pool(lambda b, c=c: country_of[b] == c.country and status_of[b] == c.status)
        cap = tot[0] + tot[1] + tot[2]  # everything senior to customer deposits
        stress = Fraction(sum(tot), 5)
        assert stress <= cap and max(0, loss) <= cap, (c.country, c.status)
        worst = min(worst, Fraction(cap - stress, sum(tot)))
    print(f"  ok   minimum capacity margin over the 20% stress: "
          f"{float(worst) * 100:.2f}pp of cell liabilities")

    if not ok:
        sys.exit("fixture calibration failed")


def write(outdir, banks, balances, impairments, excluded):
    os.makedirs(outdir, exist_ok=True)

    def dump(name, header, rows):
        with open(os.path.join(outdir, name), "w", newline="\n") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)

    dump("banks.csv", ["bank_id", "name", "country", "status"], banks)
    dump("balance.csv",
         ["bank_id", "year", "equity", "subordinated_debt", "senior_debt",
          "customer_deposits", "bank_deposits", "other_liabilities", "total_assets"],
         balances)
    dump("impairments.csv",
         ["bank_id", "year", "loan_writedowns", "nonrecurring_expenses",
          "security_impairments"],
         impairments)
    with open(os.path.join(outdir, "exclusions.txt"), "w", newline="\n") as fh:
        fh.write("# Subsidiaries consolidated into their parent records.\n")
        for bid in excluded:
            fh.write(bid + "\n")
    with open(os.path.join(outdir, "europe2006.manifest"), "w", newline="\n") as fh:
        fh.write("# Calibrated European bank dataset, 2006 base year.\n"
                 "banks = banks.csv\n"
                 "balance = balance.csv\n"
                 "impairments = impairments.csv\n"
                 "exclusions = exclusions.txt\n"
                 "base_year = 2006\n"
                 "impairment_start = 2008\n"
                 "impairment_end = 2012\n")


def main():
    outdir = sys.argv[1] if len(sys.argv) > 1 else "fixtures"
    cells, banks, balances, impairments, excluded = build()
    verify(cells, banks, balances, impairments, set(excluded))
    write(outdir, banks, balances, impairments, excluded)
    counts = {}
    for b in banks:
        if b[0] not in excluded:
            counts[b[3]] = counts.get(b[3], 0) + 1
    print(f"wrote {len(banks)} banks ({counts}), {len(balances)} balance rows, "
          f"{len(impairments)} impairment rows to {outdir}/")


if __name__ == "__main__":
    main()
