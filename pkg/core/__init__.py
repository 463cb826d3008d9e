# Package marker for core layer: errors, ports, pipeline service and use cases
