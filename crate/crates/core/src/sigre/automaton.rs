use std::collections::{BTreeSet, HashMap, VecDeque};

use super::{Letter, Regex, Word};

/// Trimmed, ε-free nondeterministic automaton over the signature alphabet.
///
/// Every state is reachable from an initial state and co-reachable to an
/// accepting one; the empty language is the automaton with no states.
#[derive(Clone, Debug)]
pub struct Automaton {
    initial: Vec<usize>,
    accepting: Vec<bool>,
    delta: Vec<[Vec<usize>; 3]>,
}

/// Subset-construction view of an [`Automaton`], state 0 being the dead state.
#[derive(Clone, Debug)]
pub struct Dfa {
    start: u32,
    trans: Vec<[u32; 3]>,
    accepting: Vec<bool>,
}

impl Dfa {
    #[inline]
    pub fn start(&self) -> u32 {
        self.start
    }

    #[inline]
    pub fn step(&self, q: u32, l: Letter) -> u32 {
        self.trans[q as usize][l.index()]
    }

    #[inline]
    pub fn is_accepting(&self, q: u32) -> bool {
        self.accepting[q as usize]
    }

    #[inline]
    pub fn is_dead(&self, q: u32) -> bool {
        q == 0
    }

    pub fn run(&self, letters: &[Letter]) -> u32 {
        let mut q = self.start;
        for &l in letters {
            q = self.trans[q as usize][l.index()];
            if q == 0 {
                break;
            }
        }
        q
    }

    pub fn accepts(&self, letters: &[Letter]) -> bool {
        self.accepting[self.run(letters) as usize]
    }

    pub fn num_states(&self) -> usize {
        self.trans.len()
    }
}

#[derive(Default)]
struct Glushkov {
    letters: Vec<Letter>,
    follow: Vec<BTreeSet<usize>>,
}

struct Summary {
    nullable: bool,
    first: BTreeSet<usize>,
    last: BTreeSet<usize>,
}

impl Glushkov {
    fn walk(&mut self, r: &Regex) -> Summary {
        match r {
            Regex::Empty => Summary {
                nullable: false,
                first: BTreeSet::new(),
                last: BTreeSet::new(),
            },
            Regex::Epsilon => Summary {
                nullable: true,
                first: BTreeSet::new(),
                last: BTreeSet::new(),
            },
            Regex::Letter(l) => {
                let p = self.letters.len();
                self.letters.push(*l);
                self.follow.push(BTreeSet::new());
                Summary {
                    nullable: false,
                    first: BTreeSet::from([p]),
                    last: BTreeSet::from([p]),
                }
            }
            Regex::Union(parts) => {
                let mut acc = Summary {
                    nullable: false,
                    first: BTreeSet::new(),
                    last: BTreeSet::new(),
                };
                for p in parts {
                    let s = self.walk(p);
                    acc.nullable |= s.nullable;
                    acc.first.extend(s.first);
                    acc.last.extend(s.last);
                }
                acc
            }
            Regex::Concat(parts) => {
                let mut acc = Summary {
                    nullable: true,
                    first: BTreeSet::new(),
                    last: BTreeSet::new(),
                };
                for p in parts {
                    let s = self.walk(p);
                    for &x in &acc.last {
                        self.follow[x].extend(s.first.iter().copied());
                    }
                    if acc.nullable {
                        acc.first.extend(s.first.iter().copied());
                    }
                    let mut last = s.last;
                    if s.nullable {
                        last.extend(acc.last.iter().copied());
                    }
                    acc.last = last;
                    acc.nullable &= s.nullable;
                }
                acc
            }
            Regex::Star(inner) => {
                let s = self.walk(inner);
                for &x in &s.last {
                    self.follow[x].extend(s.first.iter().copied());
                }
                Summary {
                    nullable: true,
                    first: s.first,
                    last: s.last,
                }
            }
        }
    }
}

/// Position (Glushkov) construction followed by trimming.
pub fn compile(ast: &Regex) -> Automaton {
    let mut g = Glushkov::default();
    let s = g.walk(ast);
    let n = g.letters.len() + 1;
    let mut delta = vec![[Vec::new(), Vec::new(), Vec::new()]; n];
    let mut accepting = vec![false; n];
    accepting[0] = s.nullable;
    for &p in &s.first {
        delta[0][g.letters[p].index()].push(p + 1);
    }
    for (p, fol) in g.follow.iter().enumerate() {
        for &q in fol {
            delta[p + 1][g.letters[q].index()].push(q + 1);
        }
    }
    for &p in &s.last {
        accepting[p + 1] = true;
    }
    Automaton::trimmed(vec![0], accepting, delta)
}

/// Automaton for `{ w : some series over [0,h] has signature w }`.
pub fn bounded_height_automaton(h: usize) -> Automaton {
    let n = h + 1;
    let mut delta = vec![[Vec::new(), Vec::new(), Vec::new()]; n];
    for (a, row) in delta.iter_mut().enumerate() {
        row[Letter::Lt.index()] = (a + 1..n).collect();
        row[Letter::Eq.index()] = vec![a];
        row[Letter::Gt.index()] = (0..a).collect();
    }
    Automaton::trimmed((0..n).collect(), vec![true; n], delta)
}

/// Product construction; the result is trimmed.
pub fn intersect(a: &Automaton, b: &Automaton) -> Automaton {
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut initial = Vec::new();
    let mut pairs = Vec::new();
    for &p in &a.initial {
        for &q in &b.initial {
            let id = pairs.len();
            index.insert((p, q), id);
            pairs.push((p, q));
            queue.push_back(id);
            initial.push(id);
        }
    }
    let mut delta: Vec<[Vec<usize>; 3]> = Vec::new();
    while let Some(id) = queue.pop_front() {
        let (p, q) = pairs[id];
        let mut row: [Vec<usize>; 3] = Default::default();
        for l in Letter::ALL {
            for &p2 in &a.delta[p][l.index()] {
                for &q2 in &b.delta[q][l.index()] {
                    let t = *index.entry((p2, q2)).or_insert_with(|| {
                        pairs.push((p2, q2));
                        queue.push_back(pairs.len() - 1);
                        pairs.len() - 1
                    });
                    row[l.index()].push(t);
                }
            }
        }
        if delta.len() <= id {
            delta.resize(id + 1, Default::default());
        }
        delta[id] = row;
    }
    delta.resize(pairs.len(), Default::default());
    let accepting = pairs.iter().map(|&(p, q)| a.accepting[p] && b.accepting[q]).collect();
    Automaton::trimmed(initial, accepting, delta)
}

impl Automaton {
    fn trimmed(initial: Vec<usize>, accepting: Vec<bool>, delta: Vec<[Vec<usize>; 3]>) -> Automaton {
        let n = delta.len();
        let mut fwd = vec![false; n];
        let mut stack: Vec<usize> = initial.clone();
        for &s in &initial {
            fwd[s] = true;
        }
        while let Some(s) = stack.pop() {
            for row in &delta[s] {
                for &t in row {
                    if !fwd[t] {
                        fwd[t] = true;
                        stack.push(t);
                    }
                }
            }
        }
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (s, rows) in delta.iter().enumerate() {
            for row in rows {
                for &t in row {
                    rev[t].push(s);
                }
            }
        }
        let mut bwd = vec![false; n];
        let mut stack: Vec<usize> = (0..n).filter(|&s| accepting[s]).collect();
        for &s in &stack {
            bwd[s] = true;
        }
        while let Some(s) = stack.pop() {
            for &p in &rev[s] {
                if !bwd[p] {
                    bwd[p] = true;
                    stack.push(p);
                }
            }
        }
        let mut map = vec![usize::MAX; n];
        let mut k = 0;
        for s in 0..n {
            if fwd[s] && bwd[s] {
                map[s] = k;
                k += 1;
            }
        }
        let mut new_delta = vec![[Vec::new(), Vec::new(), Vec::new()]; k];
        let mut new_acc = vec![false; k];
        for s in 0..n {
            if map[s] == usize::MAX {
                continue;
            }
            new_acc[map[s]] = accepting[s];
            for l in 0..3 {
                let mut row: Vec<usize> = delta[s][l]
                    .iter()
                    .filter(|&&t| map[t] != usize::MAX)
                    .map(|&t| map[t])
                    .collect();
                row.sort_unstable();
                row.dedup();
                new_delta[map[s]][l] = row;
            }
        }
        let mut new_init: Vec<usize> = initial
            .iter()
            .filter(|&&s| map[s] != usize::MAX)
            .map(|&s| map[s])
            .collect();
        new_init.sort_unstable();
        new_init.dedup();
        Automaton {
            initial: new_init,
            accepting: new_acc,
            delta: new_delta,
        }
    }

    /// Accepts every word.
    pub fn universal() -> Automaton {
        Automaton {
            initial: vec![0],
            accepting: vec![true],
            delta: vec![[vec![0], vec![0], vec![0]]],
        }
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }

    pub fn initial_states(&self) -> &[usize] {
        &self.initial
    }

    pub fn is_accepting(&self, s: usize) -> bool {
        self.accepting[s]
    }

    pub fn successors(&self, s: usize, l: Letter) -> &[usize] {
        &self.delta[s][l.index()]
    }

    fn step_set(&self, from: &[usize], l: Letter, mark: &mut [bool]) -> Vec<usize> {
        let mut out = Vec::new();
        for &s in from {
            for &t in &self.delta[s][l.index()] {
                if !mark[t] {
                    mark[t] = true;
                    out.push(t);
                }
            }
        }
        for &t in &out {
            mark[t] = false;
        }
        out.sort_unstable();
        out
    }

    fn run_from(&self, start: &[usize], w: &[Letter]) -> Vec<usize> {
        let mut mark = vec![false; self.num_states()];
        let mut cur = start.to_vec();
        for &l in w {
            if cur.is_empty() {
                break;
            }
            cur = self.step_set(&cur, l, &mut mark);
        }
        cur
    }

    pub fn accepts(&self, w: &Word) -> bool {
        self.run_from(&self.initial, w.letters())
            .iter()
            .any(|&s| self.accepting[s])
    }

    /// True iff `u1·w·u2` is accepted for some `u1`, `u2`.
    pub fn is_factor(&self, w: &Word) -> bool {
        if self.is_empty() {
            return false;
        }
        let all: Vec<usize> = (0..self.num_states()).collect();
        // Trimmed: every state is reachable and co-reachable.
        !self.run_from(&all, w.letters()).is_empty()
    }

    /// Words of length at most `max_len`, canonical order.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Word> {
        let dfa = self.determinize();
        let mut out = Vec::new();
        for k in 0..=max_len {
            words_of_length_into(&dfa, k, &mut out);
        }
        out
    }

    /// Words of exactly length `k`, canonical order.
    pub fn words_of_length(&self, k: usize) -> Vec<Word> {
        let mut out = Vec::new();
        words_of_length_into(&self.determinize(), k, &mut out);
        out
    }

    pub fn exists_word_of_length(&self, k: usize) -> bool {
        let mut mark = vec![false; self.num_states()];
        let mut cur = self.initial.clone();
        for _ in 0..k {
            if cur.is_empty() {
                return false;
            }
            let mut next = Vec::new();
            for &s in &cur {
                for row in &self.delta[s] {
                    for &t in row {
                        if !mark[t] {
                            mark[t] = true;
                            next.push(t);
                        }
                    }
                }
            }
            for &t in &next {
                mark[t] = false;
            }
            cur = next;
        }
        cur.iter().any(|&s| self.accepting[s])
    }

    /// Length of a shortest nonempty accepted word (breadth-first).
    pub fn shortest_nonempty_len(&self) -> Option<usize> {
        let n = self.num_states();
        let mut dist = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for &s in &self.initial {
            for row in &self.delta[s] {
                for &t in row {
                    if dist[t] == usize::MAX {
                        dist[t] = 1;
                        queue.push_back(t);
                    }
                }
            }
        }
        while let Some(s) = queue.pop_front() {
            if self.accepting[s] {
                return Some(dist[s]);
            }
            for row in &self.delta[s] {
                for &t in row {
                    if dist[t] == usize::MAX {
                        dist[t] = dist[s] + 1;
                        queue.push_back(t);
                    }
                }
            }
        }
        None
    }

    /// Whether the language is infinite (the trimmed graph has a cycle).
    pub fn is_infinite(&self) -> bool {
        // Iterative three-colour DFS.
        let n = self.num_states();
        let mut colour = vec![0u8; n];
        for root in 0..n {
            if colour[root] != 0 {
                continue;
            }
            let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
            colour[root] = 1;
            while let Some(&(s, k)) = stack.last() {
                let succ: Vec<usize> = self.delta[s].iter().flatten().copied().collect();
                if k < succ.len() {
                    let t = succ[k];
                    stack.last_mut().unwrap().1 += 1;
                    match colour[t] {
                        0 => {
                            colour[t] = 1;
                            stack.push((t, 0));
                        }
                        1 => return true,
                        _ => {}
                    }
                } else {
                    colour[s] = 2;
                    stack.pop();
                }
            }
        }
        false
    }

    /// Set of word lengths of a finite language; `None` if infinite.
    pub fn lengths(&self) -> Option<BTreeSet<usize>> {
        if self.is_infinite() {
            return None;
        }
        let mut out = BTreeSet::new();
        // Acyclic: every path has at most num_states letters.
        let mut cur = self.initial.clone();
        let mut mark = vec![false; self.num_states()];
        for k in 0..=self.num_states() {
            if cur.iter().any(|&s| self.accepting[s]) {
                out.insert(k);
            }
            let mut next = Vec::new();
            for &s in &cur {
                for row in &self.delta[s] {
                    for &t in row {
                        if !mark[t] {
                            mark[t] = true;
                            next.push(t);
                        }
                    }
                }
            }
            for &t in &next {
                mark[t] = false;
            }
            cur = next;
        }
        Some(out)
    }

    /// Subset construction from the initial states.
    pub fn determinize(&self) -> Dfa {
        self.determinize_from(&self.initial, false)
    }

    /// Deterministic factor recogniser: accepts `w` iff `w` is a factor of
    /// some accepted word.
    pub fn factor_dfa(&self) -> Dfa {
        let all: Vec<usize> = (0..self.num_states()).collect();
        self.determinize_from(&all, true)
    }

    fn determinize_from(&self, start: &[usize], any_live: bool) -> Dfa {
        let mut mark = vec![false; self.num_states()];
        let mut index: HashMap<Vec<usize>, u32> = HashMap::new();
        let mut sets: Vec<Vec<usize>> = vec![Vec::new()];
        index.insert(Vec::new(), 0);
        let mut s0 = start.to_vec();
        s0.sort_unstable();
        s0.dedup();
        let start_id = if s0.is_empty() {
            0
        } else {
            index.insert(s0.clone(), 1);
            sets.push(s0);
            1
        };
        let mut trans: Vec<[u32; 3]> = vec![[0, 0, 0]];
        let mut k = 1;
        while k < sets.len() {
            let cur = sets[k].clone();
            let mut row = [0u32; 3];
            for l in Letter::ALL {
                let next = self.step_set(&cur, l, &mut mark);
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = sets.len() as u32;
                        index.insert(next.clone(), id);
                        sets.push(next);
                        id
                    }
                };
                row[l.index()] = id;
            }
            trans.push(row);
            k += 1;
        }
        let accepting = sets
            .iter()
            .map(|s| {
                if any_live {
                    !s.is_empty()
                } else {
                    s.iter().any(|&q| self.accepting[q])
                }
            })
            .collect();
        Dfa {
            start: start_id,
            trans,
            accepting,
        }
    }

    /// Language equality, by a joint walk over both subset constructions.
    pub fn equivalent(&self, other: &Automaton) -> bool {
        let a = self.determinize();
        let b = other.determinize();
        let mut seen = std::collections::HashSet::new();
        let mut queue = VecDeque::from([(a.start, b.start)]);
        seen.insert((a.start, b.start));
        while let Some((p, q)) = queue.pop_front() {
            if a.is_accepting(p) != b.is_accepting(q) {
                return false;
            }
            for l in Letter::ALL {
                let nxt = (a.step(p, l), b.step(q, l));
                if seen.insert(nxt) {
                    queue.push_back(nxt);
                }
            }
        }
        true
    }
}

fn words_of_length_into(dfa: &Dfa, k: usize, out: &mut Vec<Word>) {
    // live[r][q]: from q an accepting state is reachable in exactly r steps.
    let n = dfa.num_states();
    let mut live = vec![vec![false; n]; k + 1];
    live[0].copy_from_slice(&dfa.accepting);
    for r in 1..=k {
        for q in 0..n {
            live[r][q] = Letter::ALL
                .iter()
                .any(|&l| live[r - 1][dfa.trans[q][l.index()] as usize]);
        }
    }
    if !live[k][dfa.start as usize] {
        return;
    }
    let mut buf = Vec::with_capacity(k);
    fn rec(dfa: &Dfa, live: &[Vec<bool>], q: u32, r: usize, buf: &mut Vec<Letter>, out: &mut Vec<Word>) {
        if r == 0 {
            out.push(Word::new(buf.clone()));
            return;
        }
        for l in Letter::ALL {
            let t = dfa.trans[q as usize][l.index()];
            if live[r - 1][t as usize] {
                buf.push(l);
                rec(dfa, live, t, r - 1, buf, out);
                buf.pop();
            }
        }
    }
    rec(dfa, &live, dfa.start, k, &mut buf, out);
}
