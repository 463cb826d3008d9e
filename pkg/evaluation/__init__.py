# Package marker for evaluation
