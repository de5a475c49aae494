# Domain layer - matrices, trees and the value objects describing a run
