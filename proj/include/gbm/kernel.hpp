#ifndef GBM_KERNEL_HPP
#define GBM_KERNEL_HPP

// Bounded-variation smoothing kernels psi on [-1,1] with unit integral.
// A kernel is represented as jump atoms plus a continuous piecewise-linear
// part, so the Stieltjes measure d(psi) splits into point masses at the
// atom locations and a piecewise-constant density (the slope of the linear
// part). This covers both kernels used in practice: the rectangular kernel
// is pure atoms in d(psi), the triangular kernel pure density.

#include <iosfwd>
#include <string>
#include <vector>

namespace gbm {

struct KernelAtom {
    double location; // in [-1, 1]
    double jump;     // jump of psi at the location
};

struct Kernel {
    std::vector<KernelAtom> atoms;
    std::vector<double> pl_x; // strictly increasing breakpoints in [-1,1]
    std::vector<double> pl_y; // values of the continuous part at breakpoints
    std::string name;

    // psi(u) = sum of jumps at locations <= u plus the piecewise-linear part.
    double psi(double u) const;

    // The continuous piecewise-linear part alone.
    double continuous_part(double u) const;

    // a.e. density of d(psi): the piecewise-constant slope of the linear
    // part (atoms excluded). At a breakpoint the two-sided average is used.
    double density(double u) const;

    double integral() const;      // \int psi(u) du
    double first_moment() const;  // \int u psi(u) du
    double total_jump() const;    // sum of atom jumps

    bool purely_atomic() const { return pl_x.size() < 2; }
    bool is_rectangular(double tol = 1e-12) const;

    // Enforces: support within [-1,1], continuous part vanishing at its end
    // breakpoints, total jump 0 (so psi vanishes outside the support) and
    // \int psi = 1 within 1e-12.
    void validate() const;
};

Kernel rectangular_kernel(); // psi = 1/2 on [-1,1]; d(psi) = delta_{-1}/2 - delta_{+1}/2
Kernel triangular_kernel();  // psi(t) = 1 - |t|

// Text format: one directive per line, `atom <loc> <jump>` or
// `pl <breakpoint> <value>`; blank lines and lines starting with '#' are
// ignored. The kernel is validated on load.
Kernel parse_kernel(std::istream& in, const std::string& name = "custom");
// Accepts the built-in names "rect"/"rectangular" and "tri"/"triangle"/
// "triangular", otherwise reads the file at `spec`.
Kernel load_kernel(const std::string& spec);

// Normalization constant of the regularized-derivative limit law:
//   C_psi = ( -1/2 \int\int |u-v|^alpha d(psi)(u) d(psi)(v) )^{1/2}.
// Assembled as atom-atom sums, atom-density 1D quadratures and a
// density-density 2D quadrature. Throws EvaluationError if the radicand
// comes out non-positive, naming the kernel.
double c_psi(const Kernel& kernel, double alpha);

} // namespace gbm

#endif
