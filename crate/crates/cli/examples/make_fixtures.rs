//! Regenerates the bundled end-to-end fixture set:
//!
//! ```text
//! cargo run -p synaug --example make_fixtures -- crates/cli/tests/fixtures
//! ```
//!
//! Four synthetic "inspection photos" of concrete panels with dark joints and
//! rust-coloured damage blobs, plus the binary damage masks.

use std::path::PathBuf;

use synaug_core::{Mask, Raster};

struct Blob {
    cx: f64,
    cy: f64,
    rx: f64,
    ry: f64,
}

impl Blob {
    fn contains(&self, x: usize, y: usize) -> bool {
        let dx = (x as f64 - self.cx) / self.rx;
        let dy = (y as f64 - self.cy) / self.ry;
        // slightly ragged outline
        let wobble = 0.12 * ((x as f64 * 0.31).sin() + (y as f64 * 0.27).cos());
        dx * dx + dy * dy <= 1.0 + wobble
    }
}

struct Scene {
    name: &'static str,
    width: usize,
    height: usize,
    joint_spacing: usize,
    blobs: Vec<Blob>,
}

fn hash(x: usize, y: usize, salt: u64) -> u64 {
    let mut h = (x as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
        ^ (y as u64).wrapping_mul(0xc2b2_ae3d_27d4_eb4f)
        ^ salt;
    h ^= h >> 33;
    h = h.wrapping_mul(0xff51_afd7_ed55_8ccd);
    h ^= h >> 33;
    h
}

fn render(scene: &Scene, salt: u64) -> (Raster, Mask) {
    let mask = Mask::from_fn(scene.width, scene.height, |x, y| {
        scene.blobs.iter().any(|b| b.contains(x, y))
    });
    let photo = Raster::rgb_from_fn(scene.width, scene.height, |x, y| {
        let grain = (hash(x, y, salt) % 17) as i32 - 8;
        let shade =
            150 + (x as i32 * 20 / scene.width as i32) - (y as i32 * 15 / scene.height as i32);
        let joint = x % scene.joint_spacing < 3 || y % scene.joint_spacing < 3;
        let base = if joint { shade - 85 } else { shade };
        let px = if mask.get(x, y) {
            [150 + grain, 78 + grain / 2, 42 + grain / 3]
        } else {
            [base + grain, base + grain, base + 4 + grain]
        };
        px.map(|v| v.clamp(0, 255) as u8)
    })
    .expect("valid size");
    (photo, mask)
}

fn main() {
    let out = PathBuf::from(
        std::env::args()
            .nth(1)
            .unwrap_or_else(|| "crates/cli/tests/fixtures".into()),
    );
    let scenes = [
        Scene {
            name: "pier_a",
            width: 500,
            height: 400,
            joint_spacing: 120,
            blobs: vec![
                Blob {
                    cx: 110.0,
                    cy: 90.0,
                    rx: 60.0,
                    ry: 35.0,
                },
                Blob {
                    cx: 300.0,
                    cy: 300.0,
                    rx: 45.0,
                    ry: 50.0,
                },
            ],
        },
        Scene {
            name: "girder_b",
            width: 448,
            height: 300,
            joint_spacing: 150,
            blobs: vec![Blob {
                cx: 230.0,
                cy: 110.0,
                rx: 70.0,
                ry: 30.0,
            }],
        },
        Scene {
            name: "deck_c",
            width: 384,
            height: 384,
            joint_spacing: 96,
            blobs: vec![
                Blob {
                    cx: 80.0,
                    cy: 300.0,
                    rx: 40.0,
                    ry: 40.0,
                },
                Blob {
                    cx: 300.0,
                    cy: 90.0,
                    rx: 50.0,
                    ry: 28.0,
                },
                Blob {
                    cx: 310.0,
                    cy: 320.0,
                    rx: 30.0,
                    ry: 35.0,
                },
            ],
        },
        Scene {
            name: "abutment_d",
            width: 600,
            height: 250,
            joint_spacing: 200,
            blobs: vec![
                Blob {
                    cx: 120.0,
                    cy: 120.0,
                    rx: 55.0,
                    ry: 45.0,
                },
                Blob {
                    cx: 520.0,
                    cy: 100.0,
                    rx: 40.0,
                    ry: 60.0,
                },
            ],
        },
    ];
    for (i, scene) in scenes.iter().enumerate() {
        let (photo, mask) = render(scene, i as u64 + 1);
        photo
            .write_png(out.join("photos").join(format!("{}.png", scene.name)))
            .expect("write photo");
        mask.write_png(out.join("masks").join(format!("{}.png", scene.name)))
            .expect("write mask");
        println!(
            "{}: {}x{}, {} roi px",
            scene.name,
            scene.width,
            scene.height,
            mask.count()
        );
    }
}
