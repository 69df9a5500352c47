//! A dephased qubit switching from 1/4 to 3/4: the entropy it must produce
//! while the switch happens, in nats and as heat at room temperature.

use qclock::bounds::switch_audit;
use qclock::gallery::make_bit_switch;
use qclock::runner::report_si;

fn main() -> qclock::Result<()> {
    for rate in [0.0, 1e-3, 1e-2, 0.1, 1.0] {
        let s = make_bit_switch(1.0, rate)?;
        let report = switch_audit(&s)?;
        match s.window {
            Some(w) => println!(
                "rate {rate:<6} dt = {:.6}  dS = {:.4e} >= {:.4e}  heat at 300 K = {:.3e} J",
                w.delta_t,
                report.left,
                report.right,
                report_si(report.left, 300.0)?
            ),
            None => println!("rate {rate:<6} no switch within t <= {:.2}", s.instance.horizon),
        }
    }
    Ok(())
}
