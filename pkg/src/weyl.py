# weyl.py
'''
Type A Weyl group combinatorics for GL_n: permutations in one-line notation,
reduced words, positive-root orderings, braid moves and parabolic data.
'''

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import networkx as nx

from toolkit_constants import ToolkitConstants

log = logging.getLogger(__name__)


# -----------------------
# Exceptions
# -----------------------

class WeylError(Exception):
    pass

class NotReduced(WeylError):
    pass

class DifferentTargets(WeylError):
    pass

class InvalidIndex(WeylError, ValueError):
    pass

class InvalidMove(WeylError):
    pass


# -----------------------
# Permutations
# -----------------------

@dataclass(frozen=True)
class Permutation:
    '''one-line notation: images[k-1] = w(k)'''
    images: Tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise InvalidIndex(f"{self.images} is not a permutation of 1..{len(self.images)}")

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(tuple(range(1, n + 1)))

    @staticmethod
    def simple(i: int, n: int) -> "Permutation":
        _check_index(i, n)
        imgs = list(range(1, n + 1))
        imgs[i - 1], imgs[i] = imgs[i], imgs[i - 1]
        return Permutation(tuple(imgs))

    @staticmethod
    def longest(n: int) -> "Permutation":
        return Permutation(tuple(range(n, 0, -1)))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, k: int) -> int:
        return self.images[k - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        #composition: (self * other)(k) = self(other(k))
        return Permutation(tuple(self(other(k)) for k in range(1, self.n + 1)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for k, img in enumerate(self.images, start=1):
            inv[img - 1] = k
        return Permutation(tuple(inv))

    def right_multiply_simple(self, i: int) -> "Permutation":
        #w s_i swaps positions i and i+1
        imgs = list(self.images)
        imgs[i - 1], imgs[i] = imgs[i], imgs[i - 1]
        return Permutation(tuple(imgs))

    def length(self) -> int:
        return coxeter_length(self)

    def __str__(self):
        return "[" + ",".join(str(x) for x in self.images) + "]"


def _check_index(i: int, n: int):
    if not (1 <= i <= n - 1):
        raise InvalidIndex(f"simple reflection index {i} out of range 1..{n - 1}")


def coxeter_length(perm: Permutation) -> int:
    '''number of inversions'''
    imgs = perm.images
    return sum(1 for a in range(len(imgs)) for b in range(a + 1, len(imgs)) if imgs[a] > imgs[b])


def word_product_permutation(word: Sequence[int], n: int) -> Permutation:
    w = Permutation.identity(n)
    for i in word:
        _check_index(i, n)
        w = w.right_multiply_simple(i)
    return w


# -----------------------
# Roots and reduced words
# -----------------------

@dataclass(frozen=True, order=True)
class PositiveRoot:
    '''alpha_{ij} = eps_i - eps_j with i < j'''
    i: int
    j: int

    def __post_init__(self):
        if not self.i < self.j:
            raise InvalidIndex(f"a_{{{self.i},{self.j}}} is not a positive root")

    @property
    def height(self) -> int:
        return self.j - self.i

    def is_simple(self) -> bool:
        return self.j == self.i + 1

    def __str__(self):
        return f"a_{{{self.i},{self.j}}}"


@dataclass(frozen=True)
class ReducedWord:
    indices: Tuple[int, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        for i in self.indices:
            _check_index(i, self.n)
        if not is_reduced(self.indices, self.n):
            raise NotReduced(f"{self.indices} is not reduced in S_{self.n}")

    @property
    def target(self) -> Permutation:
        return word_product_permutation(self.indices, self.n)

    def __len__(self):
        return len(self.indices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __getitem__(self, k):
        return self.indices[k]

    def __str__(self):
        return ",".join(str(i) for i in self.indices)

    def to_dict(self):
        return {"n": self.n, "word": list(self.indices), "target": list(self.target.images)}


WordLike = Union[ReducedWord, Sequence[int]]


def as_word(word: WordLike, n: int) -> ReducedWord:
    if isinstance(word, ReducedWord):
        return word
    return ReducedWord(tuple(word), n)


def parse_word(text: str, n: int) -> ReducedWord:
    try:
        idx = tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError as e:
        raise ValueError(f'bad word "{text}"') from e
    return ReducedWord(idx, n)


def word_i0(n: int) -> ReducedWord:
    '''(1,2,...,n-1, 1,...,n-2, ..., 1,2, 1)'''
    if n < 2:
        raise InvalidIndex("word_i0 needs n >= 2")
    idx: List[int] = []
    for top in range(n - 1, 0, -1):
        idx.extend(range(1, top + 1))
    return ReducedWord(tuple(idx), n)


def is_reduced(word: Sequence[int], n: int) -> bool:
    for i in word:
        _check_index(i, n)
    return len(word) == coxeter_length(word_product_permutation(word, n))


def root_order(word: WordLike, n: Optional[int] = None) -> List[PositiveRoot]:
    '''alpha^i_j = s_{i_1}...s_{i_{j-1}} alpha_{i_j}'''
    if not isinstance(word, ReducedWord):
        if n is None:
            raise InvalidIndex("root_order of a bare index list needs n")
        idx = tuple(word)
        for i in idx:
            _check_index(i, n)
        if not is_reduced(idx, n):
            raise NotReduced(f"{idx} is not reduced in S_{n}")
        word = ReducedWord(idx, n)
    roots: List[PositiveRoot] = []
    w = Permutation.identity(word.n)
    for i in word:
        a, b = w(i), w(i + 1)
        roots.append(PositiveRoot(a, b))
        w = w.right_multiply_simple(i)
    return roots


# -----------------------
# Braid moves
# -----------------------

@dataclass(frozen=True)
class BraidMove:
    '''kind 2: (i,j)->(j,i) with |i-j|>=2; kind 3: (i,j,i)->(j,i,j) with |i-j|=1; position is 1-based'''
    kind: int
    position: int

    @property
    def span(self) -> Tuple[int, ...]:
        return tuple(range(self.position, self.position + self.kind))

    def __str__(self):
        return f"{self.kind}-move@{self.position}"

    def to_dict(self):
        return {"kind": self.kind, "position": self.position}


def move_applies(word: Sequence[int], move: BraidMove) -> bool:
    p = move.position - 1
    if p < 0 or p + move.kind > len(word):
        return False
    if move.kind == 2:
        return abs(word[p] - word[p + 1]) >= 2
    if move.kind == 3:
        return word[p] == word[p + 2] and abs(word[p] - word[p + 1]) == 1
    return False


def apply_move(word: WordLike, move: BraidMove, n: Optional[int] = None) -> Tuple[int, ...]:
    idx = tuple(word)
    if not move_applies(idx, move):
        raise InvalidMove(f"{move} does not apply to {idx}")
    p = move.position - 1
    out = list(idx)
    if move.kind == 2:
        out[p], out[p + 1] = idx[p + 1], idx[p]
    else:
        i, j = idx[p], idx[p + 1]
        out[p:p + 3] = [j, i, j]
    return tuple(out)


def available_moves(word: Sequence[int]) -> List[BraidMove]:
    moves = []
    for pos in range(1, len(word) + 1):
        for kind in (2, 3):
            mv = BraidMove(kind, pos)
            if move_applies(word, mv):
                moves.append(mv)
    return moves


def braid_graph(word: WordLike, n: int, stop_at: Optional[Tuple[int, ...]] = None) -> nx.DiGraph:
    '''reduced words reachable from word by braid moves, edges carry the move'''
    start = tuple(word)
    g = nx.DiGraph()
    g.add_node(start)
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for mv in available_moves(cur):
            nxt = apply_move(cur, mv)
            if nxt not in g:
                g.add_node(nxt)
                queue.append(nxt)
            g.add_edge(cur, nxt, move=mv)
        if stop_at is not None and stop_at in g:
            break
    log.debug("braid graph from %s: %d words", start, g.number_of_nodes())
    return g


def braid_path(word_a: WordLike, word_b: WordLike, n: Optional[int] = None) -> List[BraidMove]:
    '''shortest sequence of braid moves taking word_a to word_b'''
    if n is None:
        n = word_a.n if isinstance(word_a, ReducedWord) else word_b.n
    a = as_word(word_a, n)
    b = as_word(word_b, n)
    if a.target != b.target:
        raise DifferentTargets(f"{a} and {b} represent different permutations")
    if a.indices == b.indices:
        return []
    if n > ToolkitConstants.BRAID_BFS_MAX_N:
        raise WeylError(f"braid search limited to n <= {ToolkitConstants.BRAID_BFS_MAX_N}")
    g = braid_graph(a.indices, n, stop_at=b.indices)
    nodes = nx.shortest_path(g, a.indices, b.indices)
    return [g.edges[u, v]["move"] for u, v in zip(nodes, nodes[1:])]


# -----------------------
# Parabolic data
# -----------------------

@dataclass(frozen=True)
class ParabolicData:
    '''I^P complement n_1 < ... < n_l < n; blocks are (n_{i-1}, n_i]'''
    n: int
    ip: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "ip", tuple(int(x) for x in self.ip))
        prev = 0
        for x in self.ip:
            if x <= prev or x >= self.n:
                raise InvalidIndex(f"I^P {self.ip} must be strictly increasing inside 1..{self.n - 1}")
            prev = x

    @staticmethod
    def from_ip(n: int, ip: Sequence[int]) -> "ParabolicData":
        return ParabolicData(n, tuple(ip))

    @staticmethod
    def borel(n: int) -> "ParabolicData":
        return ParabolicData(n, tuple(range(1, n)))

    @staticmethod
    def parse(n: int, text: str) -> "ParabolicData":
        if text.strip().upper() == "B":
            return ParabolicData.borel(n)
        try:
            ip = tuple(int(p) for p in text.split(",") if p.strip())
        except ValueError as e:
            raise ValueError(f'bad --P value "{text}"') from e
        return ParabolicData(n, ip)

    @property
    def l(self) -> int:
        return len(self.ip)

    @property
    def bounds(self) -> Tuple[int, ...]:
        '''(n_0=0, n_1, ..., n_l, n_{l+1}=n)'''
        return (0,) + self.ip + (self.n,)

    @property
    def block_sizes(self) -> Tuple[int, ...]:
        b = self.bounds
        return tuple(b[r] - b[r - 1] for r in range(1, len(b)))

    @property
    def blocks(self) -> List[range]:
        b = self.bounds
        return [range(b[r - 1] + 1, b[r] + 1) for r in range(1, len(b))]

    def block_of(self, i: int) -> int:
        '''1-based index of the block containing row/column i'''
        for r, blk in enumerate(self.blocks, start=1):
            if i in blk:
                return r
        raise InvalidIndex(f"{i} outside 1..{self.n}")

    def is_borel(self) -> bool:
        return self.ip == tuple(range(1, self.n))

    def offset(self, k: int) -> int:
        '''s_k = sum_{j<k} (n-j)'''
        return sum(self.n - j for j in range(1, k))

    def is_dot(self, k: int, a: int) -> bool:
        '''v_(k,a) sits at row k+a, column k'''
        r = k + a
        return 1 <= k < r <= self.n and self.block_of(r) > self.block_of(k)

    def dots(self) -> List[Tuple[int, int]]:
        return [(k, a) for k in range(1, self.n) for a in range(1, self.n - k + 1) if self.is_dot(k, a)]

    def dot_index(self, k: int, a: int) -> int:
        return self.offset(k) + a

    def root_of_dot(self, k: int, a: int) -> PositiveRoot:
        return PositiveRoot(k, k + a)

    def label(self) -> str:
        if self.is_borel():
            return f"B(n={self.n})"
        return "F_{" + ",".join(str(x) for x in self.ip) + f"}}(C^{self.n})"

    def to_dict(self):
        return {"n": self.n, "IP": list(self.ip)}


def wp_w0_word(P: ParabolicData) -> ReducedWord:
    '''prod_k prod_{a ascending, v_(k,a) a dot} s_a'''
    idx = tuple(a for (k, a) in P.dots())
    return ReducedWord(idx, P.n)


def wl_word(P: ParabolicData, j: int) -> Tuple[int, ...]:
    '''reduced word of w_{L_j}: column c holds s_i for i = n_j - 1 down to c'''
    b = P.bounds
    lo, hi = b[j - 1], b[j]
    out: List[int] = []
    for c in range(lo + 1, hi):
        out.extend(range(hi - 1, c - 1, -1))
    return tuple(out)


def wp_word(P: ParabolicData) -> Tuple[int, ...]:
    out: List[int] = []
    for j in range(1, P.l + 2):
        out.extend(wl_word(P, j))
    return tuple(out)


def wr_word(P: ParabolicData, j: int) -> Tuple[int, ...]:
    '''
    word of the reflected square of L_j, spanning [A+1, B] with A = n - n_j,
    B = n - n_{j-1}; columns right to left, each read top-down s_C .. s_{B-1}
    '''
    b = P.bounds
    A, B = P.n - b[j], P.n - b[j - 1]
    out: List[int] = []
    for C in range(B - 1, A, -1):
        out.extend(range(C, B))
    return tuple(out)


def wp_representative(P: ParabolicData):
    '''w_P dot = w_{L_1} dot ... w_{L_{l+1}} dot as a matrix of sdot factors'''
    import genmat
    return genmat.sdot_product(wp_word(P), P.n)
