mod barrier_study;
mod exact;
mod packet;
mod planewave;
mod tdse;

use wavescatter::{GaussianPacket, PiecewisePotential};

use crate::args::{Command, PacketSpecArgs, PotentialArgs};
use crate::error::{config, Result};

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Planewave(a) => planewave::run(a),
        Command::Packet(a) => packet::run(a),
        Command::Exact(a) => exact::run(a),
        Command::BarrierStudy(a) => barrier_study::run(a),
        Command::Tdse(a) => tdse::run(a),
    }
}

impl PotentialArgs {
    fn given(&self) -> bool {
        self.step.is_some()
            || self.barrier.is_some()
            || self.v0.is_some()
            || self.potential.is_some()
    }

    pub fn build(&self) -> Result<PiecewisePotential> {
        let chosen = [
            self.step.is_some(),
            self.barrier.is_some(),
            self.v0.is_some(),
            self.potential.is_some(),
        ]
        .iter()
        .filter(|&&b| b)
        .count();
        if chosen != 1 {
            return Err(config(
                "give exactly one of --step, --barrier, --V0, --potential",
            ));
        }
        if self.a.is_some() && (self.step.is_some() || self.potential.is_some()) {
            return Err(config("--a applies only to --barrier and --V0"));
        }
        // --step and --barrier take 2mV0/hbar^2; with hbar = m = 1 that is 2 V0
        if let Some(u) = self.step {
            return Ok(PiecewisePotential::step(u / 2.0));
        }
        if let Some(u) = self.barrier {
            let a = self.a.ok_or_else(|| config("--barrier needs --a"))?;
            return Ok(PiecewisePotential::barrier(u / 2.0, a)?);
        }
        if let Some(v0) = self.v0 {
            return Ok(match self.a {
                Some(a) => PiecewisePotential::barrier(v0, a)?,
                None => PiecewisePotential::step(v0),
            });
        }
        let text = self.potential.as_deref().unwrap_or_default();
        text.parse()
            .map_err(|e| config(format!("--potential `{text}`: {e}")))
    }

    pub fn build_optional(&self) -> Result<Option<PiecewisePotential>> {
        if self.given() || self.a.is_some() {
            self.build().map(Some)
        } else {
            Ok(None)
        }
    }
}

/// Packet offset defaults to ten widths.
pub const DEFAULT_OFFSET_SIGMAS: f64 = 10.0;

impl PacketSpecArgs {
    pub fn k0(&self) -> Result<f64> {
        self.k0.ok_or_else(|| config("missing --k0"))
    }

    pub fn sigma(&self) -> Result<f64> {
        self.sigma.ok_or_else(|| config("missing --sigma"))
    }

    pub fn build_with(&self, k0: f64, sigma: f64) -> Result<GaussianPacket> {
        let a = self.offset.unwrap_or(DEFAULT_OFFSET_SIGMAS * sigma);
        Ok(GaussianPacket::new(k0, sigma, a)?)
    }

    pub fn build(&self) -> Result<GaussianPacket> {
        self.build_with(self.k0()?, self.sigma()?)
    }
}
