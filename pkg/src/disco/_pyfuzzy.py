"""Pure-Python fuzzy matching kernel (fallback for ``disco._cfuzzy``)."""


def levenshtein(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def edit_similarity(a: str, b: str) -> float:
    """1 - levenshtein / longer length, on casefolded input."""
    a = a.lower()
    b = b.lower()
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - levenshtein(a, b) / longest


def fuzzy_score(a: str, b: str) -> float:
    a = a.lower()
    b = b.lower()
    if a in b or b in a:
        return 1.0
    return 1.0 - levenshtein(a, b) / max(len(a), len(b))


def best_score(tokens, weights, fields) -> float:
    """max(weight * fuzzy_score(token, field)) over all token/field pairs."""
    best = 0.0
    for token, weight in zip(tokens, weights):
        if weight <= best:
            continue
        for field in fields:
            s = weight * fuzzy_score(token, field)
            if s > best:
                best = s
                if s >= weight:
                    break
    return best
