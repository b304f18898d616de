"""One more until operator always buys strictly more expressive power.

For each k the pair below agrees on every formula with k nested untils, yet the
formula phi[k+1] = p & X(p & X(...)) with k+1 of them separates it.

Run: python3 demos/until_hierarchy.py
"""

from tempo_ef import FamilyParams, MtlGameConfig, eval_mtl, extract_formula, family, solve_mg
from tempo_ef.corpus import phi_until

for k in (1, 2, 3):
    fam = family("prop4.8-until", FamilyParams(r=2, k=k))
    C, h = fam.claim.constants, fam.claim.horizon
    target = phi_until(k + 1)
    weak = solve_mg(MtlGameConfig(fam.w0, fam.w1, C, k, h)).winner
    strong_cfg = MtlGameConfig(fam.w0, fam.w1, C, k + 1, h)
    print(f"k={k}")
    print(f"  {target}: w0 {eval_mtl(fam.w0, 0, target)}, w1 {eval_mtl(fam.w1, 0, target)}")
    print(f"  MG_{k}: {weak.value};  MG_{k + 1}: {solve_mg(strong_cfg).winner.value}")
    print(f"  formula read off Spoiler's strategy: {extract_formula(strong_cfg)}")
