"""Input sources for the CI singles/doubles, anion and cation examples.

Each preset is a bra-operator-ket sandwich with the bra amplitude first.
The one-electron operator is ``h[p,q] c(p) a(q)``; the two-electron one is
``1/2 V[p,q,r,s] c(p) c(q) a(s) a(r)``.
"""

_H1 = "c(p) a(q)"
_H2 = "c(p) c(q) a(s) a(r)"

PRESETS = {
    "cis-h1": f"t[j=>b] t[i=>a] c(j) a(b) {_H1} c(a) a(i) h[p,q]",
    "cis-h2": f"1/2 t[j=>b] t[i=>a] c(j) a(b) {_H2} c(a) a(i) V[p,q,r,s]",
    "cid-h1": f"t[k,l=>c,d] t[i,j=>a,b] c(l) c(k) a(d) a(c) {_H1} c(a) c(b) a(i) a(j) h[p,q]",
    "cid-h2": f"1/2 t[k,l=>c,d] t[i,j=>a,b] c(l) c(k) a(d) a(c) {_H2} c(a) c(b) a(i) a(j) V[p,q,r,s]",
    "anion-h1": f"t[=>b] t[=>a] a(b) {_H1} c(a) h[p,q]",
    "anion-h2": f"1/2 t[=>b] t[=>a] a(b) {_H2} c(a) V[p,q,r,s]",
    "cation-h1": f"t[j=>] t[i=>] c(j) {_H1} a(i) h[p,q]",
    "cation-h2": f"1/2 t[j=>] t[i=>] c(j) {_H2} a(i) V[p,q,r,s]",
}


class UnknownPreset(KeyError):
    pass


def preset(name: str) -> str:
    try:
        return PRESETS[name]
    except KeyError:
        raise UnknownPreset(name) from None
