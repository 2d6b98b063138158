// Quick tour of the convolution algebra layer: matrix units from pair
// groupoids, the Kronecker picture of a product, and the three norms on
// a random element.

#include <cstdio>

#include "gcat/constructions.hpp"
#include "gcat/convolution.hpp"
#include "gcat/dense.hpp"
#include "gcat/matrix_model.hpp"

using namespace gcat;

int main() {
  // e_12 e_23 = e_13 inside C*(G_3) = M_3.
  ModeledGroupoid three = make_matrix_groupoid(3);
  const FiniteGroupoid& g3 = three.groupoid;
  ConvolutionElement e12 = basis_element(g3, g3.id_index.at("(1,2)"));
  ConvolutionElement e23 = basis_element(g3, g3.id_index.at("(2,3)"));
  ConvolutionElement prod = convolve(e12, e23);
  std::printf("e_12 * e_23 in C*(%s):\n", g3.name.c_str());
  for (int x = 0; x < g3.size(); ++x)
    if (std::abs(prod.coeff(x)) > 0)
      std::printf("  %+.1f at %s\n", prod.coeff(x).real(),
                  g3.arrow_ids[x].c_str());

  // The product groupoid realizes the tensor product: convolving
  // delta_{(1,2)} (x) delta_{(2,3)} matches kron(e_12, e_23).
  ModeledGroupoid two = make_matrix_groupoid(2);
  FiniteGroupoid g6 = product_groupoid(two.groupoid, g3);
  MatrixModel model6 = product_model(two.model, three.model);
  ConvolutionElement f = random_int_element(g6, 1);
  ConvolutionElement h = random_int_element(g6, 2);
  Mat lhs = block_diag(to_matrices(g6, model6, convolve(f, h)));
  Mat rhs = block_diag(to_matrices(g6, model6, f)) *
            block_diag(to_matrices(g6, model6, h));
  std::printf("\n%s: convolution vs matrix product defect = %.1e (exact)\n",
              g6.name.c_str(), max_abs(lhs - rhs));

  // Norm sandwich on a random element.
  ConvolutionElement r = random_element(g6, 7);
  Mat rm = block_diag(to_matrices(g6, model6, r));
  std::printf("\nrandom element of C*(%s):\n", g6.name.c_str());
  std::printf("  I-norm        %.6f\n", i_norm(r));
  std::printf("  reduced norm  %.6f\n", reduced_norm(r));
  std::printf("  matrix norm   %.6f\n", op_norm(rm));
  return 0;
}
