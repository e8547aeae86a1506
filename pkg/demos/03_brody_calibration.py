# coding: utf-8

# # Calibrating the spacing pipeline
#
# The Brody family interpolates between Poisson spacings (q=0, uncorrelated
# levels) and the Wigner surmise (q=1, level repulsion).  Before trusting a fit
# on a Hamiltonian spectrum, run the same unfold + fit on spectra whose answer
# is known.

from aqcsat.brody import brody_sample, fit_brody, histogram_csv
from aqcsat.ensembles import goe_pipeline_check, poisson_pipeline_check

# Maximum likelihood on synthetic draws from the family itself.

for q in (0.0, 0.25, 0.5, 0.75, 1.0):
    fit = fit_brody(brody_sample(q, 50_000, seed=int(100 * q)))
    print(f"q*={q:4.2f}  fitted q={fit.q:.3f}  logL={fit.log_likelihood:.1f}")

# Random matrices: 50 GOE matrices of dimension 256 should land near q=1,
# independent uniform levels near q=0.

goe = goe_pipeline_check(256, 50, seed=0)
poisson = poisson_pipeline_check(256, 50, seed=0)
print(f"GOE     q={goe.q:.3f} from {goe.sample_size} spacings")
print(f"Poisson q={poisson.q:.3f} from {poisson.sample_size} spacings")

# A histogram with the fitted density, ready for any plotting tool.

sample = brody_sample(1.0, 5000, seed=7)
with open("wigner_histogram.csv", "w") as fh:
    fh.write(histogram_csv(sample, fit_brody(sample), bins=20))
print("wrote wigner_histogram.csv")
