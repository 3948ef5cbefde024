# reporting package: file formats, manifests and SVG plots
