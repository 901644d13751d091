"""Regenerate the shipped family catalog (src/cplx1/data/catalog.json).

Entries are int literals or expression strings over the family parameters;
see cplx1.catalog.evaluate for the expression language.
"""

import json
import sys
from pathlib import Path

TR = "u transposed relative to the source listing, whose class lies outside Mov or gives a singular model"
T2 = [[1,1],[1,1],[1,1]]
fams = []
def F(**kw): fams.append(kw)
E = "any"
# smooth families (table 1.1)
F(id="T1.1-1", theorem="1.1", number="1", blocks=[[1,1,2],[1,1],[1,1]], m=[0,0], scalars={"a":[1,3],"b":[1,3]},
  constraints=["a <= b"], T=[[0,1],[0,1],[1,0],[1,"a"],[1,"2-a"],[1,"b"],[1,"2-b"]], u=[1,"1+b"], dim="4", status=E)
F(id="T1.1-2", theorem="1.1", number="2", blocks=[[1,1,1],[1,1],[1,1]], m=[0,0],
  T=[[0,1],[0,1],[1,0],[1,1],[0,1],[1,1],[0,1]], u=[1,2], dim="4", status=E)
F(id="T1.1-3", theorem="1.1", number="3", blocks=[[1,1,2],[1,1],[2]], m=[0,0], scalars={"a":[1,3]},
  T=[[0,1],[0,1],[1,0],[1,"2-a"],[1,"a"],[1,1]], u=[1,"1+a"], dim="3", status=E)
F(id="T1.1-4", theorem="1.1", number="4", blocks=[[1,"l2"],[1,"l4"],[1,"l6"]], m=[0,5],
  scalars={"a":[0,3],"b":[0,3],"l4":[1,3]}, derived={"l2":"a + l4","l6":"a + l4 - b"},
  vectors={"c":{"first":1,"range":[-3,3]}}, constraints=["a <= b","l6 >= 1"],
  T=[[0,1],[1,0],["a",1],[1,0],["b",1],[1,0]], S=["c[k]",1], u=["max(b, c) + 1",1], dim="m + 3", status=E)
F(id="T1.1-5", theorem="1.1", number="5", blocks=[[1,1],[2,1],[2,1]], m=[0,5], scalars={"a":[0,3]},
  T=[[0,1],["2*a + 1",1],["a",1],[1,0],["a",1],[1,0]], S=[1,0], u=["2*a + 2",1], dim="m + 3", status=E)
F(id="T1.1-6", theorem="1.1", number="6", blocks=[[1,1],[1,1],[2,1]], m=[1,5], scalars={"a":[0,3],"b":[0,3],"c":[0,3]},
  constraints=["a < b","a + b == 2*c + 1"], T=[[0,1],["2*c + 1",1],["a",1],["b",1],["c",1],[1,0]], S=[1,0],
  u=["2*c + 2",1], dim="m + 3", status=E)
F(id="T1.1-7", theorem="1.1", number="7", blocks=T2, m=[1,5], T=[[0,1],[0,1],[0,1],[0,1],[-1,1],[1,1]], S=[1,0],
  u=[1,2], dim="m + 3", status=E)
F(id="T1.1-8", theorem="1.1", number="8", blocks=T2, m=[2,5], vectors={"a":{"first":2,"range":[0,3]}},
  constraints=["max(a) > 0"], T=[[0,1]]*6, S=[1,"0 if k == 1 else a[k]"], u=[1,"max(a) + 1"], dim="m + 3", status=E)
F(id="T1.1-9", theorem="1.1", number="9", blocks=T2, m=[2,5], scalars={"a3":[0,3],"a4":[0,3],"a5":[0,3],"a6":[0,3]},
  derived={"a2":"a3 + a4"}, constraints=["a3 <= a5 <= a6 <= a4 <= a2","a2 == a5 + a6"],
  T=[[0,1],["a2",1],["a3",1],["a4",1],["a5",1],["a6",1]], S=[1,0], u=["a2 + 1",1], dim="m + 3", status=E)
B10 = [[1,1],[1,1],[2]]
F(id="T1.1-10", theorem="1.1", number="10", blocks=B10, m=[1,5], T=[[1,-1],[1,1],[1,0],[1,0],[1,0]], S=[0,1],
  u=[2,1], dim="m + 2", status=E)
F(id="T1.1-11", theorem="1.1", number="11", blocks=B10, m=[2,5], vectors={"a":{"first":2,"range":[0,3]}},
  constraints=["max(a) > 0"], T=[[1,0]]*5, S=["0 if k == 1 else a[k]",1], u=["max(a) + 1",1], dim="m + 2", status=E)
F(id="T1.1-12", theorem="1.1", number="12", blocks=B10, m=[2,5], scalars={"a":[0,3],"b":[0,3],"c":[0,3]},
  constraints=["a <= c <= b","a + b == 2*c"], T=[[1,0],[1,"2*c"],[1,"a"],[1,"b"],[1,"c"]], S=[0,1],
  u=[1,"2*c + 1"], dim="m + 2", status=E)
F(id="T1.1-13", theorem="1.1", number="13", blocks=[[1,1]]*4, m=[0,0], lam=True,
  T=[[1,0],[0,1]]*4, u=[1,1], dim="4", status=E)
# Fano families (table 1.2): u is the anticanonical class
def fano(num, **kw):
    kw.setdefault("u", kw["minus_K"])
    F(id=f"T1.2-{num.replace('.', '')}", theorem="1.2", number=num, status="fano", **kw)
fano("1", blocks=[[1,1,2],[1,1],[1,1]], m=[0,0], T=[[0,1],[0,1],[1,0],[1,1],[1,1],[1,1],[1,1]], minus_K=[3,4], dim="4")
fano("2", blocks=[[1,1,1],[1,1],[1,1]], m=[0,0], T=[[0,1],[0,1],[1,0],[1,1],[0,1],[1,1],[0,1]], minus_K=[2,4], dim="4")
fano("3", blocks=[[1,1,2],[1,1],[2]], m=[0,0], T=[[0,1],[0,1],[1,0],[1,1],[1,1],[1,1]], minus_K=[2,3], dim="3")
ALT = [[0,1],[1,0],[0,1],[1,0],[0,1],[1,0]]
fano("4.A", blocks=T2, m=[0,5], scalars={"c":[-1,0]}, constraints=["m >= 1 or c == 0"], T=ALT,
     S=["c if k == 1 else 0",1], minus_K=["2 + c","2 + m"], dim="m + 3")
B4B = [[1,2],[1,1],[1,1]]
W4B = [[0,1],[1,0],[1,1],[1,0],[1,1],[1,0]]
fano("4.B", blocks=B4B, m=[0,5], T=W4B, S=[1,1], minus_K=["3 + m","2 + m"], dim="m + 3")
fano("4.C", blocks=[[1,2]]*3, m=[0,5], T=ALT, S=[0,1], minus_K=[1,"2 + m"], dim="m + 3")
W5 = [[0,1],["2*a + 1",1],["a",1],[1,0],["a",1],[1,0]]
fano("5", blocks=[[1,1],[2,1],[2,1]], m=[1,5], scalars={"a":[0,3]}, constraints=["2*a < m"], T=W5, S=[1,0],
     minus_K=["2*a + m + 2",2], dim="m + 3")
W6 = [[0,1],["2*c + 1",1],["a",1],["b",1],["c",1],[1,0]]
fano("6", blocks=[[1,1],[1,1],[2,1]], m=[1,5], scalars={"a":[0,3],"b":[0,3],"c":[0,3]},
     constraints=["a < b","a + b == 2*c + 1","m > 3*c + 1"], T=W6, S=[1,0], minus_K=["3*c + 2 + m",3], dim="m + 3")
W7 = [[0,1],[0,1],[0,1],[0,1],[-1,1],[1,1]]
fano("7", blocks=T2, m=[1,3], T=W7, S=[1,0], minus_K=["m",4], dim="m + 3")
fano("8", blocks=T2, m=[2,5], vectors={"a":{"first":2,"range":[0,3]}},
     constraints=["1 <= max(a) <= 3","4 + sum(a) > m*max(a)"], T=[[0,1]]*6, S=[1,"0 if k == 1 else a[k]"],
     minus_K=["m","4 + sum(a)"], dim="m + 3")
W9 = [[0,1],["a2",1],["a3",1],["a4",1],["a5",1],["a6",1]]
S9 = {"a3":[0,3],"a4":[0,3],"a5":[0,3],"a6":[0,3]}
C9 = ["a3 <= a5 <= a6 <= a4 <= a2","a2 == a5 + a6"]
fano("9", blocks=T2, m=[2,5], scalars=S9, derived={"a2":"a3 + a4"}, constraints=C9 + ["2*a2 < m"], T=W9, S=[1,0],
     minus_K=["2*a2 + m",4], dim="m + 3")
W10 = [[1,-1],[1,1],[1,0],[1,0],[1,0]]
fano("10", blocks=B10, m=[1,2], T=W10, S=[0,1], minus_K=[3,"m"], dim="m + 2")
fano("11", blocks=B10, m=[2,5], vectors={"a":{"first":2,"range":[0,3]}},
     constraints=["1 <= max(a) <= 2","3 + sum(a) > m*max(a)"], T=[[1,0]]*5, S=["0 if k == 1 else a[k]",1],
     minus_K=["3 + sum(a)","m"], dim="m + 2")
W12 = [[1,0],[1,"2*c"],[1,"a"],[1,"b"],[1,"c"]]
S12 = {"a":[0,3],"b":[0,3],"c":[0,3]}
C12 = ["a <= c <= b","a + b == 2*c"]
fano("12", blocks=B10, m=[2,5], scalars=S12, constraints=C12 + ["3*c < m"], T=W12, S=[0,1],
     minus_K=[3,"3*c + m"], dim="m + 2")
fano("13", blocks=[[1,1]]*4, m=[0,0], lam=True, T=[[1,0],[0,1]]*4, minus_K=[2,2], dim="4")
# truly almost Fano families (table 1.4)
def almost(num, **kw):
    F(id=f"T1.4-{num.replace('.', '')}", theorem="1.4", number=num, status="truly_almost_fano", **kw)
almost("4.A", blocks=T2, m=[1,5], vectors={"c":{"first":1,"range":[-3,3]}},
       constraints=["(2 + m)*max(0, c) == 2 + sum(c)"], T=ALT, S=["c[k]",1],
       u=[1,"1 + max(0, c)"], minus_K=["2 + sum(c)","2 + m"], dim="m + 3")
almost("4.B", blocks=B4B, m=[1,5], T=W4B, S=["0 if k == 1 else 1",1], u=[2,1], u_table=[1,2], note=TR, minus_K=["2 + m","2 + m"], dim="m + 3")
almost("4.C", blocks=[[1,2]]*3, m=[1,5], T=ALT, S=["-1 if k == 1 else 0",1], u=[1,1], minus_K=[0,"2 + m"], dim="m + 3")
almost("4.D", blocks=[[1,2],[1,2],[1,1]], m=[0,5], T=[[0,1],[1,0],[0,1],[1,0],[1,1],[1,0]], S=[1,1], u=[2,1],
       u_table=[1,2], note=TR, minus_K=["2 + m","2 + m"], dim="m + 3")
almost("4.E", blocks=[[1,3],[1,1],[1,1]], m=[0,5], T=[[0,1],[1,0],[2,1],[1,0],[2,1],[1,0]], S=[2,1], u=[3,1], u_table=[1,3], note=TR,
       minus_K=["4 + 2*m","2 + m"], dim="m + 3")
almost("4.F", blocks=[[1,3],[1,2],[1,2]], m=[0,5], T=W4B, S=[1,1], u=[2,1], u_table=[1,2], note=TR, minus_K=["2 + m","2 + m"], dim="m + 3")
almost("5", blocks=[[1,1],[2,1],[2,1]], m=[0,5], scalars={"a":[0,3]}, constraints=["m == 2*a"], T=W5, S=[1,0],
       u=["m + 2",1], minus_K=["2*a + m + 2",2], dim="m + 3")
almost("6", blocks=[[1,1],[1,1],[2,1]], m=[1,5], scalars={"a":[0,3],"b":[0,3],"c":[0,3]},
       constraints=["a < b","a + b == 2*c + 1","m == 3*c + 1"], T=W6, S=[1,0], u=["2*c + 2",1],
       minus_K=["3*c + 2 + m",3], dim="m + 3")
almost("7", blocks=T2, m=[4,4], T=W7, S=[1,0], u=[1,2], minus_K=[4,4], dim="m + 3")
almost("8", blocks=T2, m=[2,5], vectors={"a":{"first":2,"range":[0,3]}},
       constraints=["max(a) > 0","4 + sum(a) == m*max(a)"], T=[[0,1]]*6, S=[1,"0 if k == 1 else a[k]"],
       u=[1,"max(a) + 1"], minus_K=["m","4 + sum(a)"], dim="m + 3")
almost("9", blocks=T2, m=[2,5], scalars=S9, derived={"a2":"a3 + a4"}, constraints=C9 + ["m == 2*a2"], T=W9, S=[1,0],
       u=["a2 + 1",1], minus_K=["2*a2 + m",4], dim="m + 3")
almost("10", blocks=B10, m=[3,3], T=W10, S=[0,1], u=[2,1], minus_K=[3,3], dim="m + 2")
almost("11", blocks=B10, m=[2,5], vectors={"a":{"first":2,"range":[0,3]}},
       constraints=["max(a) > 0","3 + sum(a) == m*max(a)"], T=[[1,0]]*5, S=["0 if k == 1 else a[k]",1],
       u=["max(a) + 1",1], u_table=[1,"max(a) + 1"], note=TR, minus_K=["3 + sum(a)","m"], dim="m + 2")
almost("12", blocks=B10, m=[3,5], scalars=S12, constraints=C12 + ["m == 3*c"], T=W12, S=[0,1], u=[1,"2*c + 1"],
       minus_K=[3,"3*c + m"], dim="m + 2")
# seeds (table 5.5)
def seed(num, tag, **kw):
    F(id=f"T5.5-{num.replace('.', '')}" + (f"-m{tag}" if tag else ""), theorem="5.5", number=num, **kw)
seed("4.A", "1", blocks=T2, m=[1,1], T=ALT, S_list=[[0,1]], u=[1,1], dim="m + 3", status="fano")
seed("4.A", "2", blocks=T2, m=[2,2], T=ALT, S_list=[[-1,1],[0,1]], u=[1,1], dim="m + 3", status="fano")
seed("4.B", "", blocks=B4B, m=[1,1], T=W4B, S_list=[[1,1]], u=[2,1], dim="m + 3", status="fano")
seed("4.C", "", blocks=[[1,2]]*3, m=[1,1], T=ALT, S_list=[[0,1]], u=[1,1], dim="m + 3", status="fano")
seed("5", "", blocks=[[1,1],[2,1],[2,1]], m=[1,1], scalars={"a":[0,3]}, T=W5, S_list=[[1,0]], u=["2*a + 2",1],
     dim="m + 3", status="'fano' if a == 0 else 'any'")
seed("6", "", blocks=[[1,1],[1,1],[2,1]], m=[1,1], scalars={"a":[0,3],"b":[0,3],"c":[0,3]},
     constraints=["a < b","a + b == 2*c + 1"], T=W6, S_list=[[1,0]], u=["2*c + 2",1], dim="m + 3",
     status="'truly_almost_fano' if c == 0 else 'any'",
     note="source marks c = 0 as Fano, but m = 1 = 3c + 1 is the truly almost Fano case")
seed("7", "", blocks=T2, m=[1,1], T=W7, S_list=[[1,0]], u=[1,2], dim="m + 3", status="fano")
seed("8", "2", blocks=T2, m=[2,2], scalars={"a":[1,3]}, T=[[0,1]]*6, S_list=[[1,0],[1,"a"]], u=[1,"a + 1"],
     dim="m + 3", status="fano")
seed("8", "3", blocks=T2, m=[3,3], scalars={"a":[1,2]}, T=[[0,1]]*6, S_list=[[1,0],[1,"a - 1"],[1,"a"]],
     u=[1,"a + 1"], dim="m + 3", status="fano")
seed("8", "4", blocks=T2, m=[4,4], T=[[0,1]]*6, S_list=[[1,0],[1,0],[1,0],[1,1]], u=[1,2], dim="m + 3", status="fano")
seed("9", "", blocks=T2, m=[2,2], scalars=S9, derived={"a2":"a3 + a4"}, constraints=C9, T=W9, S_list=[[1,0],[1,0]],
     u=["a2 + 1",1], dim="m + 3", status="'fano' if a2 == 0 else 'any'")
seed("10", "", blocks=B10, m=[1,1], T=W10, S_list=[[0,1]], u=[2,1], dim="m + 2", status="fano")
seed("11", "2", blocks=B10, m=[2,2], scalars={"a":[1,2]}, T=[[1,0]]*5, S_list=[[0,1],["a",1]], u=["a + 1",1],
     dim="m + 2", status="fano")
seed("11", "3", blocks=B10, m=[3,3], T=[[1,0]]*5, S_list=[[0,1],[0,1],[1,1]], u=[2,1], dim="m + 2", status="fano")
seed("12", "", blocks=B10, m=[2,2], scalars=S12, constraints=C12, T=W12, S_list=[[0,1],[0,1]], u=[1,"2*c + 1"],
     dim="m + 2", status="'fano' if c == 0 else 'any'")
doc = {"format": "cplx1-catalog", "version": 1, "families": fams}
out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parents[1] / "src/cplx1/data/catalog.json"
out.write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")
print(f"{len(fams)} families written to {out}")
