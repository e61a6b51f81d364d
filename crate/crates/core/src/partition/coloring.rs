use super::graph::BipartiteGraph;

/// Colors `1..=b` per edge, indexed like [`BipartiteGraph::edges`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColoring {
    colors: Vec<usize>,
}

impl EdgeColoring {
    pub fn from_colors(colors: Vec<usize>) -> Self {
        EdgeColoring { colors }
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn color_of(&self, edge: usize) -> usize {
        self.colors[edge]
    }

    pub fn color_count(&self) -> usize {
        self.colors.iter().copied().max().unwrap_or(0)
    }

    /// No vertex sees the same color twice and every color is in `1..=degree`.
    pub fn is_feasible(&self, g: &BipartiteGraph) -> bool {
        if self.colors.len() != g.size() {
            return false;
        }
        let b = g.degree();
        let mut used = vec![false; g.order() * (b + 1)];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let c = self.colors[e];
            if c == 0 || c > b {
                return false;
            }
            for x in [u, v] {
                let slot = &mut used[x * (b + 1) + c];
                if *slot {
                    return false;
                }
                *slot = true;
            }
        }
        true
    }
}

/// Proper edge coloring with `degree` colors.
///
/// Edges are processed in stored order. Each takes the smallest color free
/// at its left endpoint; if that color is taken at the right endpoint, the
/// alternating path from the right endpoint is recolored first.
pub fn edge_color(g: &BipartiteGraph) -> EdgeColoring {
    let b = g.degree();
    let order = g.order();
    // at[v * (b + 1) + c] = edge of color c at vertex v
    let mut at: Vec<Option<usize>> = vec![None; order * (b + 1)];
    let mut colors = vec![0usize; g.size()];
    let edges = g.edges();
    let free = |at: &[Option<usize>], v: usize| {
        (1..=b)
            .find(|&c| at[v * (b + 1) + c].is_none())
            .expect("vertex degree exceeds color count")
    };

    for (e, &(u, v)) in edges.iter().enumerate() {
        let alpha = free(&at, u);
        if at[v * (b + 1) + alpha].is_some() {
            let beta = free(&at, v);
            // Collect the alpha/beta path leaving v along alpha. It cannot
            // reach u because u has no alpha edge and left vertices are
            // entered along alpha.
            let mut path = Vec::new();
            let mut x = v;
            let mut want = alpha;
            while let Some(f) = at[x * (b + 1) + want] {
                path.push(f);
                let (a, c) = edges[f];
                x = if a == x { c } else { a };
                want = if want == alpha { beta } else { alpha };
            }
            for &f in &path {
                let (a, c) = edges[f];
                at[a * (b + 1) + colors[f]] = None;
                at[c * (b + 1) + colors[f]] = None;
            }
            for &f in &path {
                let (a, c) = edges[f];
                colors[f] = if colors[f] == alpha { beta } else { alpha };
                at[a * (b + 1) + colors[f]] = Some(f);
                at[c * (b + 1) + colors[f]] = Some(f);
            }
        }
        colors[e] = alpha;
        at[u * (b + 1) + alpha] = Some(e);
        at[v * (b + 1) + alpha] = Some(e);
    }
    EdgeColoring { colors }
}
