// Regenerates danish_road_climate.model from the programmatic builder.
//
//   export_danish_model [OUTPUT]     (stdout when OUTPUT is omitted)
#include <fstream>
#include <iostream>

#include "roadrisk/climate/danish_model.hpp"
#include "roadrisk/io/model_io.hpp"

int main(int argc, char** argv) {
  const std::string text = roadrisk::io::save_model(roadrisk::climate::danish_model_document());
  if (argc < 2) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(argv[1], std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "export_danish_model: cannot write " << argv[1] << "\n";
    return 2;
  }
  return 0;
}
