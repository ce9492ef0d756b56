//! The BCH code family of length 63 and a decode beyond the design radius.

use subthz::fec::{code_table, BchCode, DecodeStatus};

fn main() -> subthz::Result<()> {
    println!("  n   k  t  rate");
    for e in code_table() {
        println!("{:3} {:3} {:2}  {:.3}", e.n, e.k, e.t, e.rate);
    }
    let code = BchCode::with_k(45)?;
    let msg: Vec<u8> = (0..code.k()).map(|i| (i % 3 == 0) as u8).collect();
    let word = code.encode(&msg)?;
    for flips in [0, 2, 3, 4, 6] {
        let mut rx = word.clone();
        for i in 0..flips {
            rx[i * 10] ^= 1;
        }
        let out = code.decode(&rx)?;
        let verdict = match out.status {
            DecodeStatus::Corrected(n) => format!("corrected {n}"),
            DecodeStatus::Failed => "decoder failure".to_string(),
        };
        println!(
            "{flips} errors: {verdict}, message {}",
            if out.message == msg {
                "intact"
            } else {
                "wrong"
            }
        );
    }
    Ok(())
}
