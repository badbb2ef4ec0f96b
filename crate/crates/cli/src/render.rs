//! SVG strip diagrams.
//!
//! Each drawn strip is a rectangle; the strips glued to its upper boundary
//! are stacked directly above it, one column per boundary interval. Infinite
//! families are cut after `repeat` instances and marked with `⋯`.

use std::fmt::Write as _;

use folia::{IndexPattern, SurfaceTree};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderConfig {
    /// Instances drawn per infinite family.
    pub repeat: usize,
    /// Number of tree levels drawn.
    pub depth: usize,
    pub strip_width: u32,
    pub strip_height: u32,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            repeat: 3,
            depth: 4,
            strip_width: 60,
            strip_height: 28,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("repeat must be at least 1")]
    Repeat,
    #[error("depth must be at least 1")]
    Depth,
}

impl RenderConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.repeat == 0 {
            return Err(ConfigError::Repeat);
        }
        if self.depth == 0 {
            return Err(ConfigError::Depth);
        }
        Ok(())
    }
}

enum Column {
    Free,
    Glued(Box<Drawn>),
    /// An elided family or a subtree cut off by the depth limit.
    Elided,
}

struct Drawn {
    columns: Vec<Column>,
    width: u32,
}

const FREE_WIDTH: u32 = 24;
const MARK_WIDTH: u32 = 20;
const GAP: u32 = 6;
const LEVEL_GAP: u32 = 10;
const MARGIN: u32 = 10;

fn expand<'a>(
    pattern: &'a IndexPattern<Option<SurfaceTree>>,
    repeat: usize,
) -> Vec<Option<&'a Option<SurfaceTree>>> {
    let some = |v: Vec<&'a Option<SurfaceTree>>| v.into_iter().map(Some).collect::<Vec<_>>();
    match pattern {
        IndexPattern::Fin(slots) => some(slots.iter().collect()),
        IndexPattern::Nat { prefix, cycle } => {
            let mut out = some(
                prefix
                    .iter()
                    .chain(cycle.iter().cycle().take(repeat))
                    .collect(),
            );
            out.push(None);
            out
        }
        IndexPattern::Neg { prefix, cycle } => {
            let mut tail: Vec<_> = prefix
                .iter()
                .chain(cycle.iter().cycle().take(repeat))
                .collect();
            tail.reverse();
            let mut out = vec![None];
            out.extend(some(tail));
            out
        }
        IndexPattern::IntCyc(cycle) => {
            let mut out = vec![None];
            out.extend(some(cycle.iter().cycle().take(repeat).collect()));
            out.push(None);
            out
        }
        IndexPattern::IntSup(support) => {
            let mut sorted: Vec<_> = support.iter().collect();
            sorted.sort_by_key(|(k, _)| *k);
            let mut out = vec![None];
            out.extend(sorted.into_iter().map(|(_, s)| Some(s)));
            out.push(None);
            out
        }
    }
}

fn build(tree: &SurfaceTree, level: usize, cfg: &RenderConfig) -> Drawn {
    let columns: Vec<Column> = expand(&tree.children, cfg.repeat)
        .into_iter()
        .map(|slot| match slot {
            None => Column::Elided,
            Some(None) => Column::Free,
            Some(Some(_)) if level + 1 >= cfg.depth => Column::Elided,
            Some(Some(child)) => Column::Glued(Box::new(build(child, level + 1, cfg))),
        })
        .collect();
    let inner: u32 = columns
        .iter()
        .map(|c| match c {
            Column::Free => FREE_WIDTH,
            Column::Elided => MARK_WIDTH,
            Column::Glued(d) => d.width,
        })
        .sum::<u32>()
        + GAP * (columns.len() as u32 + 1);
    Drawn {
        width: inner.max(cfg.strip_width),
        columns,
    }
}

fn levels(d: &Drawn) -> usize {
    1 + d
        .columns
        .iter()
        .map(|c| match c {
            Column::Glued(child) => levels(child),
            _ => 0,
        })
        .max()
        .unwrap_or(0)
}

/// Number of strips drawn for `tree` under `cfg`.
pub fn drawn_strip_count(tree: &SurfaceTree, cfg: &RenderConfig) -> usize {
    fn count(d: &Drawn) -> usize {
        1 + d
            .columns
            .iter()
            .map(|c| match c {
                Column::Glued(child) => count(child),
                _ => 0,
            })
            .sum::<usize>()
    }
    count(&build(tree, 0, cfg))
}

struct Canvas<'c> {
    out: String,
    cfg: &'c RenderConfig,
    levels: usize,
}

impl Canvas<'_> {
    fn y_of(&self, level: usize) -> u32 {
        MARGIN + (self.levels - 1 - level) as u32 * (self.cfg.strip_height + LEVEL_GAP)
    }

    fn draw(&mut self, d: &Drawn, x: u32, level: usize) {
        let h = self.cfg.strip_height;
        let y = self.y_of(level);
        let _ = writeln!(
            self.out,
            r##"  <rect class="strip" x="{x}" y="{y}" width="{}" height="{h}" fill="#e8eef7" stroke="#34495e"/>"##,
            d.width
        );
        // lower boundary J_1
        let _ = writeln!(
            self.out,
            r##"  <line class="interval" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#c0392b" stroke-width="3"/>"##,
            x + d.width / 2 - 8,
            y + h,
            x + d.width / 2 + 8,
            y + h
        );
        let used: u32 = d
            .columns
            .iter()
            .map(|c| match c {
                Column::Free => FREE_WIDTH,
                Column::Elided => MARK_WIDTH,
                Column::Glued(child) => child.width,
            })
            .sum::<u32>()
            + GAP * (d.columns.len() as u32 + 1);
        let mut cx = x + (d.width - used) / 2 + GAP;
        for c in &d.columns {
            match c {
                Column::Free => {
                    let _ = writeln!(
                        self.out,
                        r##"  <line class="interval" x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="#c0392b" stroke-width="3"/>"##,
                        cx + 4,
                        cx + FREE_WIDTH - 4
                    );
                    cx += FREE_WIDTH;
                }
                Column::Elided => {
                    let _ = writeln!(
                        self.out,
                        r##"  <text class="elide" x="{}" y="{}" font-size="14" text-anchor="middle">⋯</text>"##,
                        cx + MARK_WIDTH / 2,
                        y.saturating_sub(2)
                    );
                    cx += MARK_WIDTH;
                }
                Column::Glued(child) => {
                    self.draw(child, cx, level + 1);
                    cx += child.width;
                }
            }
            cx += GAP;
        }
    }
}

/// Renders `tree` as an SVG 1.1 document.
pub fn render_svg(tree: &SurfaceTree, cfg: &RenderConfig) -> String {
    let drawn = build(tree, 0, cfg);
    let lv = levels(&drawn);
    let width = drawn.width + 2 * MARGIN;
    let height = 2 * MARGIN + lv as u32 * (cfg.strip_height + LEVEL_GAP);
    let mut canvas = Canvas {
        out: String::new(),
        cfg,
        levels: lv,
    };
    canvas.draw(&drawn, MARGIN, 0);
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n\
         {}</svg>\n",
        canvas.out
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use folia::textio::parse_surface;

    fn rects(svg: &str) -> usize {
        svg.matches(r#"<rect class="strip""#).count()
    }

    #[test]
    fn counts_match_vertices() {
        let cfg = RenderConfig::default();
        let t = parse_surface("(strip (fin))").unwrap();
        assert_eq!(rects(&render_svg(&t, &cfg)), 1);
        let t = parse_surface("(strip (fin (strip (fin)) (strip (fin))))").unwrap();
        assert_eq!(rects(&render_svg(&t, &cfg)), 3);
        let t = parse_surface("(strip (int (cyc (strip (fin)))))").unwrap();
        let svg = render_svg(&t, &cfg);
        assert_eq!(rects(&svg), 4);
        assert_eq!(svg.matches(r#"class="elide""#).count(), 2);
    }

    #[test]
    fn depth_truncates() {
        let t = parse_surface("(strip (fin (strip (fin (strip (fin (strip (fin))))))))").unwrap();
        let cfg = RenderConfig {
            depth: 2,
            ..RenderConfig::default()
        };
        assert_eq!(rects(&render_svg(&t, &cfg)), 2);
        assert_eq!(drawn_strip_count(&t, &cfg), 2);
    }

    #[test]
    fn deterministic() {
        let t = parse_surface("(strip (neg (pre _) (cyc (strip (fin _)))))").unwrap();
        let cfg = RenderConfig::default();
        assert_eq!(render_svg(&t, &cfg), render_svg(&t, &cfg));
        assert!(RenderConfig { repeat: 0, ..cfg }.validate().is_err());
    }
}
