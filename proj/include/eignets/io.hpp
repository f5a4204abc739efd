#ifndef EIGNETS_IO_HPP
#define EIGNETS_IO_HPP

#include "eignets/eignet.hpp"
#include "eignets/geometry.hpp"
#include "eignets/harness.hpp"
#include "eignets/quadrature.hpp"
#include "eignets/spectral.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace eignets::io {

// doubles rendered with 17 significant digits so round trips are exact and
// reruns are byte-identical
std::string format_double(double v);

// RFC-4180: CRLF line endings, fields quoted only when needed
void write_csv(const std::filesystem::path& file, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& file,
                                               std::vector<std::string>* header = nullptr);

void write_point_set(const std::filesystem::path& file, const point_set& c);
point_set read_point_set(const std::filesystem::path& file,
                         const std::shared_ptr<const manifold>& m);

void write_rule(const std::filesystem::path& csv_file, const std::filesystem::path& cert_file,
                const quadrature_rule& rule);
quadrature_rule read_rule(const std::filesystem::path& csv_file,
                          const std::shared_ptr<const manifold>& m);

void write_spectral(const std::filesystem::path& file, const spectral_vector& f);
spectral_vector read_spectral(const std::filesystem::path& file,
                              const std::shared_ptr<const manifold>& m);

void write_eignet(const std::filesystem::path& csv_file, const std::filesystem::path& header_file,
                  const eignet& net);

void write_rate_report(const std::filesystem::path& csv_file,
                       const std::filesystem::path& json_file, const rate_report& rep,
                       const experiment_config& cfg);

// samples CSV: point coordinates + value column
std::pair<point_set, std::vector<double>> read_samples(const std::filesystem::path& file,
                                                       const std::shared_ptr<const manifold>& m);

} // namespace eignets::io

#endif
