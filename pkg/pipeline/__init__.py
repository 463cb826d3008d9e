# Package marker for pipeline stages
