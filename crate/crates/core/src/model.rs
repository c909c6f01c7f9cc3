use crate::error::Result;
use crate::lattice::SiteWindow;
use crate::metric::DiagonalMetric;
use crate::operator::BandedOperator;
use crate::potential::{ChainSpec, MultiCenterSpec, Scatterer, TwoCenterSpec};

/// Any of the supported scatterer families.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    TwoCenter(TwoCenterSpec),
    Chain(ChainSpec),
    MultiCenter(MultiCenterSpec),
}

impl Model {
    fn inner(&self) -> &dyn Scatterer {
        match self {
            Model::TwoCenter(s) => s,
            Model::Chain(s) => s,
            Model::MultiCenter(s) => s,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Model::TwoCenter(_) => "two-center",
            Model::Chain(_) => "chain",
            Model::MultiCenter(_) => "multi-center",
        }
    }
}

impl Scatterer for Model {
    fn support(&self) -> (i64, i64) {
        self.inner().support()
    }

    fn potential(&self, window: SiteWindow) -> Result<BandedOperator> {
        self.inner().potential(window)
    }

    fn metric(&self, window: SiteWindow) -> Result<DiagonalMetric> {
        self.inner().metric(window)
    }

    fn required_half_width(&self) -> usize {
        self.inner().required_half_width()
    }
}

impl From<TwoCenterSpec> for Model {
    fn from(s: TwoCenterSpec) -> Self {
        Model::TwoCenter(s)
    }
}

impl From<ChainSpec> for Model {
    fn from(s: ChainSpec) -> Self {
        Model::Chain(s)
    }
}

impl From<MultiCenterSpec> for Model {
    fn from(s: MultiCenterSpec) -> Self {
        Model::MultiCenter(s)
    }
}
