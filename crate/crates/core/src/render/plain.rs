use super::{icon_text, Block};
use crate::hazard::IconSet;

fn icon_line(icons: &IconSet) -> String {
    if icons.is_empty() {
        "none".to_string()
    } else {
        icons.iter().map(icon_text).collect::<Vec<_>>().join(" ")
    }
}

pub(super) fn write(blocks: &[Block]) -> String {
    let mut out = String::new();
    for block in blocks {
        match block {
            Block::Header { rows } => {
                out.push_str(&super::TITLE.to_uppercase());
                out.push('\n');
                for r in rows {
                    out.push_str(&r.text);
                    out.push('\n');
                }
            }
            Block::IconRow { caption, icons, .. } => {
                out.push_str(&format!("{caption}: {}\n", icon_line(icons)));
            }
            Block::Summary { text, .. } => {
                out.push_str("Summary\n");
                out.push_str(text);
                out.push('\n');
            }
            Block::Period {
                label, icons, rows, ..
            } => {
                out.push_str(label);
                out.push('\n');
                if let Some((_, set)) = icons {
                    out.push_str(&format!("Hazards: {}\n", icon_line(set)));
                }
                for r in rows {
                    out.push_str(&r.text);
                    out.push('\n');
                }
            }
        }
        out.push('\n');
    }
    out.truncate(out.trim_end().len());
    out.push('\n');
    out
}
